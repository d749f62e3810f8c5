#include "molskit/groups.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "molskit/error.hpp"

namespace molskit {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> labels, std::vector<ElementIndex> table,
                         ElementIndex identity, std::vector<int> moduli)
    : labels_(std::move(labels)), table_(std::move(table)), identity_(identity),
      moduli_(std::move(moduli)) {
  const auto n = labels_.size();
  if (n == 0) throw ValidationError("group must be nonempty");
  if (table_.size() != n * n) throw ValidationError("multiplication table has wrong size");
  if (identity_ >= n) throw ValidationError("identity index out of range");
  for (auto v : table_)
    if (v >= n) throw ValidationError("multiplication table entry out of range");

  inverses_.assign(n, static_cast<ElementIndex>(n));
  for (ElementIndex a = 0; a < n; ++a) {
    if (mul(identity_, a) != a || mul(a, identity_) != a) {
      throw ValidationError("identity is not neutral for element " + std::to_string(a));
    }
    // Latin rows give unique solutions; record the right inverse.
    for (ElementIndex b = 0; b < n; ++b) {
      if (mul(a, b) == identity_) {
        if (inverses_[a] != n) throw ValidationError("element has two inverses");
        inverses_[a] = b;
      }
    }
    if (inverses_[a] == n) throw ValidationError("element " + std::to_string(a) + " has no inverse");
  }
  // Associativity is cubic; only checked for small tables.
  if (n <= 100) {
    for (ElementIndex a = 0; a < n; ++a)
      for (ElementIndex b = 0; b < n; ++b)
        for (ElementIndex c = 0; c < n; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw ValidationError("multiplication table is not associative");
  }
}

std::string FiniteGroup::format_element(ElementIndex a) const {
  const auto& l = labels_[a];
  if (l.size() == 1) return std::to_string(l.front());
  std::string out = "(";
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(l[i]);
  }
  return out + ")";
}

ElementIndex FiniteGroup::parse_element(std::string_view text) const {
  std::vector<int> values;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  const bool tuple = i < text.size() && text[i] == '(';
  if (tuple) ++i;
  for (;;) {
    skip();
    std::size_t start = i;
    int v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i] - '0');
      if (v > 1'000'000) throw ParseError("group element too large: " + std::string(text));
      ++i;
    }
    if (i == start) throw ParseError("malformed group element: " + std::string(text));
    values.push_back(v);
    skip();
    if (tuple && i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    break;
  }
  if (tuple) {
    if (i >= text.size() || text[i] != ')') throw ParseError("unterminated tuple: " + std::string(text));
    ++i;
  }
  skip();
  if (i != text.size()) throw ParseError("trailing input in group element: " + std::string(text));
  for (ElementIndex a = 0; a < order(); ++a)
    if (labels_[a] == values) return a;
  throw ParseError("no such group element: " + std::string(text));
}

std::string FiniteGroup::spec() const {
  if (moduli_.empty()) return "table" + std::to_string(order());
  std::string out;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    if (i) out += 'x';
    out += 'Z' + std::to_string(moduli_[i]);
  }
  return out;
}

bool FiniteGroup::is_abelian() const {
  for (ElementIndex a = 0; a < order(); ++a)
    for (ElementIndex b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::size_t FiniteGroup::element_order(ElementIndex a) const {
  std::size_t k = 1;
  for (ElementIndex x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

std::vector<std::size_t> FiniteGroup::order_profile() const {
  std::vector<std::size_t> out;
  for (ElementIndex a = 0; a < order(); ++a) out.push_back(element_order(a));
  std::sort(out.begin(), out.end());
  return out;
}

FiniteGroup cyclic(int m) {
  if (m < 1) throw ValidationError("cyclic group order must be positive");
  const auto n = static_cast<std::size_t>(m);
  std::vector<std::vector<int>> labels(n);
  std::vector<ElementIndex> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    labels[a] = {static_cast<int>(a)};
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = static_cast<ElementIndex>((a + b) % n);
  }
  return FiniteGroup(std::move(labels), std::move(table), 0, {m});
}

FiniteGroup direct_product(std::span<const FiniteGroup> factors) {
  if (factors.empty()) throw ValidationError("direct_product of an empty list");
  std::size_t n = 1;
  for (const auto& f : factors) n *= f.order();

  // Mixed-radix enumeration, last factor fastest: lexicographic on labels when
  // every factor is itself lexicographically enumerated (cyclic groups are).
  std::vector<std::vector<ElementIndex>> digits(n);
  std::vector<std::vector<int>> labels(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rest = idx;
    std::vector<ElementIndex> d(factors.size());
    for (std::size_t f = factors.size(); f-- > 0;) {
      d[f] = static_cast<ElementIndex>(rest % factors[f].order());
      rest /= factors[f].order();
    }
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const auto& l = factors[f].label(d[f]);
      labels[idx].insert(labels[idx].end(), l.begin(), l.end());
    }
    digits[idx] = std::move(d);
  }
  auto encode = [&](const std::vector<ElementIndex>& d) {
    std::size_t idx = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) idx = idx * factors[f].order() + d[f];
    return static_cast<ElementIndex>(idx);
  };
  std::vector<ElementIndex> table(n * n);
  std::vector<ElementIndex> d(factors.size());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t f = 0; f < factors.size(); ++f) d[f] = factors[f].mul(digits[a][f], digits[b][f]);
      table[a * n + b] = encode(d);
    }
  }
  std::vector<ElementIndex> id_digits(factors.size());
  std::vector<int> moduli;
  bool all_cyclic_parts = true;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    id_digits[f] = factors[f].identity();
    all_cyclic_parts = all_cyclic_parts && !factors[f].moduli().empty();
    moduli.insert(moduli.end(), factors[f].moduli().begin(), factors[f].moduli().end());
  }
  if (!all_cyclic_parts) moduli.clear();
  return FiniteGroup(std::move(labels), std::move(table), encode(id_digits), std::move(moduli));
}

FiniteGroup parse_group_spec(std::string_view spec) {
  std::vector<FiniteGroup> factors;
  std::size_t i = 0;
  while (i < spec.size()) {
    if (spec[i] != 'Z') throw ParseError("group spec: expected 'Z' in \"" + std::string(spec) + "\"");
    ++i;
    std::size_t start = i;
    int m = 0;
    while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) {
      m = m * 10 + (spec[i] - '0');
      if (m > 1'000'000) throw ParseError("group spec: modulus too large");
      ++i;
    }
    if (i == start || m < 1) throw ParseError("group spec: bad modulus in \"" + std::string(spec) + "\"");
    factors.push_back(cyclic(m));
    if (i < spec.size()) {
      if (spec[i] != 'x') throw ParseError("group spec: expected 'x' in \"" + std::string(spec) + "\"");
      ++i;
      if (i == spec.size()) throw ParseError("group spec: trailing 'x'");
    }
  }
  if (factors.empty()) throw ParseError("group spec: empty");
  if (factors.size() == 1) return std::move(factors.front());
  return direct_product(factors);
}

std::vector<Permutation> regular_representation(const FiniteGroup& group) {
  const auto n = group.order();
  std::vector<Permutation> out;
  out.reserve(n);
  // Enumerate gamma_j starting from the identity element.
  std::vector<ElementIndex> order(n);
  std::iota(order.begin(), order.end(), ElementIndex{0});
  std::stable_partition(order.begin(), order.end(),
                        [&](ElementIndex j) { return j == group.identity(); });
  for (auto j : order) {
    std::vector<Point> images(n);
    for (std::size_t k = 0; k < n; ++k)
      images[k] = static_cast<Point>(group.mul(static_cast<ElementIndex>(k), j));
    out.push_back(Permutation::from_images(std::move(images)));
  }
  return out;
}

FiniteGroup group_from_regular_permutations(std::span<const Permutation> elements) {
  const auto n = elements.size();
  if (n == 0) throw ValidationError("empty permutation group");
  std::vector<ElementIndex> index_of_image(n, static_cast<ElementIndex>(n));
  for (std::size_t e = 0; e < n; ++e) {
    if (elements[e].degree() != n) {
      throw ValidationError("not regular: degree " + std::to_string(elements[e].degree()) +
                            " differs from the number of elements " + std::to_string(n));
    }
    const auto img = elements[e][0];
    if (index_of_image[img] != n) throw ValidationError("not regular: point 1 has a nontrivial stabilizer");
    index_of_image[img] = static_cast<ElementIndex>(e);
  }
  // Element labelled by the image of point 1; sort labels so the identity is 0.
  std::vector<ElementIndex> by_label(n);
  for (std::size_t img = 0; img < n; ++img) by_label[img] = index_of_image[img];
  std::unordered_map<Permutation, ElementIndex, PermutationHash> label_of;
  for (std::size_t img = 0; img < n; ++img) label_of.emplace(elements[by_label[img]], static_cast<ElementIndex>(img));

  std::vector<ElementIndex> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto it = label_of.find(compose(elements[by_label[a]], elements[by_label[b]]));
      if (it == label_of.end()) throw ValidationError("not a group: product not among the elements");
      table[a * n + b] = it->second;
    }
  }
  std::vector<std::vector<int>> labels(n);
  for (std::size_t a = 0; a < n; ++a) labels[a] = {static_cast<int>(a)};
  return FiniteGroup(std::move(labels), std::move(table), 0);
}

bool is_regular_copy_of(std::span<const Permutation> elements, const FiniteGroup& group) {
  if (elements.size() != group.order()) return false;
  try {
    const auto h = group_from_regular_permutations(elements);
    return h.is_abelian() && group.is_abelian() && h.order_profile() == group.order_profile();
  } catch (const ValidationError&) {
    return false;
  }
}

}  // namespace molskit
