#include "molskit/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "molskit/error.hpp"

namespace molskit {

namespace {

void require_same_degree(const Permutation& p, const Permutation& q, const char* op) {
  if (p.degree() != q.degree()) {
    throw DegreeMismatch(std::string(op) + ": degree " + std::to_string(p.degree()) + " vs " +
                         std::to_string(q.degree()));
  }
}

}  // namespace

Permutation::Permutation(std::size_t degree) : images_(degree) {
  if (degree > std::numeric_limits<Point>::max() + std::size_t{1}) {
    throw ValidationError("degree " + std::to_string(degree) + " exceeds the supported maximum");
  }
  std::iota(images_.begin(), images_.end(), Point{0});
}

Permutation Permutation::from_images(std::vector<Point> images) {
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto v = images[i];
    if (v >= images.size() || seen[v]) {
      throw ValidationError("image array is not a bijection (position " + std::to_string(i + 1) +
                            ", value " + std::to_string(v + 1) + ")");
    }
    seen[v] = true;
  }
  return Permutation(std::move(images), Unchecked{});
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

std::size_t Permutation::fixed_points() const noexcept {
  std::size_t count = 0;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] == i) ++count;
  return count;
}

std::size_t Permutation::order() const {
  std::vector<bool> seen(images_.size(), false);
  std::size_t result = 1;
  for (std::size_t start = 0; start < images_.size(); ++start) {
    if (seen[start]) continue;
    std::size_t len = 0;
    for (std::size_t i = start; !seen[i]; i = images_[i]) {
      seen[i] = true;
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

std::strong_ordering Permutation::operator<=>(const Permutation& other) const {
  if (auto c = degree() <=> other.degree(); c != 0) return c;
  return std::lexicographical_compare_three_way(images_.begin(), images_.end(),
                                                other.images_.begin(), other.images_.end());
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  // FNV-1a over the image array
  std::size_t h = 1469598103934665603ull;
  for (auto v : p.images()) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return h;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  require_same_degree(p, q, "compose");
  std::vector<Point> out(p.degree());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = q.images_[p.images_[i]];
  return Permutation(std::move(out), Permutation::Unchecked{});
}

Permutation inverse(const Permutation& p) {
  std::vector<Point> out(p.degree());
  for (std::size_t i = 0; i < out.size(); ++i) out[p.images_[i]] = static_cast<Point>(i);
  return Permutation(std::move(out), Permutation::Unchecked{});
}

std::size_t hamming_distance(const Permutation& p, const Permutation& q) {
  require_same_degree(p, q, "hamming_distance");
  auto a = p.images();
  auto b = q.images();
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

std::size_t min_distance(std::span<const Permutation> code) {
  if (code.size() < 2) throw ValidationError("min_distance needs at least two codewords");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < code.size(); ++i)
    for (std::size_t j = i + 1; j < code.size(); ++j)
      best = std::min(best, hamming_distance(code[i], code[j]));
  return best;
}

std::size_t set_distance(std::span<const Permutation> s, std::span<const Permutation> t) {
  if (s.empty() || t.empty()) throw ValidationError("set_distance of an empty set");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& a : s)
    for (const auto& b : t) best = std::min(best, hamming_distance(a, b));
  return best;
}

// ---------------------------------------------------------------------------
// cycle notation

namespace {

class CycleLexer {
public:
  explicit CycleLexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool consume_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  std::size_t integer() {
    skip_ws();
    std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(text_[pos_] - '0');
      if (value > 1'000'000) fail("integer too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected an integer");
    return value;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("cycle notation: " + msg + " at offset " + std::to_string(pos_));
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Permutation parse_cycles(std::string_view text, std::size_t degree) {
  if (degree == 0) throw ParseError("cycle notation: degree must be positive");
  Permutation id(degree);
  CycleLexer lex(text);
  if (lex.consume_word("Id")) {
    if (!lex.at_end()) lex.fail("trailing input after Id");
    return id;
  }
  if (lex.at_end()) lex.fail("empty input");

  std::vector<Point> images(id.images().begin(), id.images().end());
  std::vector<bool> used(degree, false);
  while (!lex.at_end()) {
    lex.expect('(');
    std::vector<std::size_t> cycle;
    for (;;) {
      const auto v = lex.integer();
      if (v == 0 || v > degree) {
        lex.fail("point " + std::to_string(v) + " outside 1.." + std::to_string(degree));
      }
      if (used[v - 1]) lex.fail("point " + std::to_string(v) + " repeated");
      used[v - 1] = true;
      cycle.push_back(v - 1);
      if (lex.peek() == ',') {
        lex.expect(',');
        continue;
      }
      lex.expect(')');
      break;
    }
    if (cycle.size() < 2) lex.fail("cycle of length 1");
    for (std::size_t i = 0; i < cycle.size(); ++i)
      images[cycle[i]] = static_cast<Point>(cycle[(i + 1) % cycle.size()]);
  }
  return Permutation::from_images(std::move(images));
}

std::string format_cycles(const Permutation& p) {
  if (p.is_identity()) return "Id";
  std::string out;
  std::vector<bool> seen(p.degree(), false);
  for (std::size_t start = 0; start < p.degree(); ++start) {
    if (seen[start] || p[start] == start) continue;
    out += '(';
    std::size_t i = start;
    do {
      if (i != start) out += ", ";
      out += std::to_string(i + 1);
      seen[i] = true;
      i = p[i];
    } while (i != start);
    out += ')';
  }
  return out;
}

std::vector<Permutation> generate_closure(std::vector<Permutation> generators, std::size_t limit) {
  if (generators.empty()) throw ValidationError("generate_closure needs at least one generator");
  const auto n = generators.front().degree();
  for (const auto& g : generators) {
    if (g.degree() != n) throw DegreeMismatch("generate_closure: mixed generator degrees");
  }
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());

  std::vector<Permutation> elements{Permutation(n)};
  std::unordered_set<Permutation, PermutationHash> seen{elements.front()};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : generators) {
      auto next = compose(elements[head], g);
      if (seen.insert(next).second) {
        if (elements.size() >= limit) {
          throw LimitExceeded("group closure exceeded limit " + std::to_string(limit),
                              elements.size());
        }
        elements.push_back(std::move(next));
      }
    }
  }
  return elements;
}

}  // namespace molskit
