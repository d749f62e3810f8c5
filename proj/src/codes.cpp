#include "molskit/codes.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "molskit/error.hpp"

namespace molskit {

namespace {

std::string pair_text(const Permutation& a, const Permutation& b) {
  return format_cycles(a) + " and " + format_cycles(b);
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

PermutationCode::PermutationCode(std::size_t n, std::vector<Permutation> words)
    : n_(n), words_(std::move(words)) {
  std::unordered_set<Permutation, PermutationHash> seen;
  for (const auto& w : words_) {
    if (w.degree() != n_) {
      throw DegreeMismatch("codeword " + format_cycles(w) + " has degree " +
                           std::to_string(w.degree()) + ", expected " + std::to_string(n_));
    }
    if (!seen.insert(w).second) throw ValidationError("repeated codeword " + format_cycles(w));
  }
}

PaReport verify_pa(std::span<const Permutation> words, std::size_t d) {
  if (words.size() < 2) throw ValidationError("verify_pa needs at least two codewords");
  PaReport report;
  report.size = words.size();
  report.min_distance = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const auto dist = hamming_distance(words[i], words[j]);
      if (dist < report.min_distance) {
        report.min_distance = dist;
        report.witness = WitnessPair{words[i], words[j], dist};
      }
    }
  }
  report.ok = report.min_distance >= d;
  return report;
}

SeparabilityPartition separability_partition(std::span<const Permutation> words) {
  if (words.empty()) throw ValidationError("separability_partition of an empty code");
  const auto n = words.front().degree();
  const auto count = words.size();

  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  // distance-n flags, reused by the transitivity check
  std::vector<std::uint8_t> full(count * count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    if (words[i].degree() != n) throw DegreeMismatch("separability_partition: mixed degrees");
    for (std::size_t j = i + 1; j < count; ++j) {
      const auto dist = hamming_distance(words[i], words[j]);
      if (dist + 1 < n) {
        throw ValidationError("distance " + std::to_string(dist) + " below n-1 between " +
                              pair_text(words[i], words[j]));
      }
      if (dist == n) {
        full[i * count + j] = full[j * count + i] = 1;
        parent[find_root(parent, i)] = find_root(parent, j);
      }
    }
  }

  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t i = 0; i < count; ++i) members[find_root(parent, i)].push_back(i);

  SeparabilityPartition out;
  out.n = n;
  for (auto& cls : members) {
    if (cls.empty()) continue;
    for (std::size_t a = 0; a < cls.size(); ++a) {
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        if (!full[cls[a] * count + cls[b]]) {
          throw ValidationError("distance-n relation is not transitive: " +
                                pair_text(words[cls[a]], words[cls[b]]) +
                                " share a class but are at distance n-1");
        }
      }
    }
    std::vector<Permutation> perms;
    perms.reserve(cls.size());
    for (auto i : cls) perms.push_back(words[i]);
    std::sort(perms.begin(), perms.end());
    out.classes.push_back(std::move(perms));
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  out.r = out.classes.front().size();
  for (const auto& cls : out.classes) {
    if (cls.size() != out.r) {
      throw ValidationError("unequal class sizes " + std::to_string(out.r) + " and " +
                            std::to_string(cls.size()) + " (classes of " +
                            pair_text(out.classes.front().front(), cls.front()) + ")");
    }
  }
  out.m = out.classes.size();
  return out;
}

// ---------------------------------------------------------------------------

LatinSquare::LatinSquare(std::vector<std::vector<Point>> rows) : rows_(std::move(rows)) {
  const auto n = rows_.size();
  if (n == 0) throw ValidationError("Latin square of order 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows_[i].size() != n) throw ValidationError("Latin square row " + std::to_string(i + 1) + " has wrong length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> row_seen(n, false), col_seen(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = rows_[i][j];
      const auto c = rows_[j][i];
      if (r >= n || row_seen[r]) throw ValidationError("row " + std::to_string(i + 1) + " is not a permutation");
      if (c >= n || col_seen[c]) throw ValidationError("column " + std::to_string(i + 1) + " is not a permutation");
      row_seen[r] = col_seen[c] = true;
    }
  }
}

bool verify_orthogonal(const LatinSquare& a, const LatinSquare& b) {
  if (a.order() != b.order()) throw DegreeMismatch("verify_orthogonal: orders differ");
  const auto n = a.order();
  std::vector<bool> seen(n * n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto key = std::size_t{a.at(i, j)} * n + b.at(i, j);
      if (seen[key]) return false;
      seen[key] = true;
    }
  }
  return true;
}

MolsSet::MolsSet(std::vector<LatinSquare> squares) : squares_(std::move(squares)) {
  for (std::size_t i = 0; i < squares_.size(); ++i) {
    for (std::size_t j = i + 1; j < squares_.size(); ++j) {
      if (!verify_orthogonal(squares_[i], squares_[j])) {
        throw ValidationError("squares " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " are not orthogonal");
      }
    }
  }
}

MolsSet code_to_mols(const SeparabilityPartition& partition) {
  if (partition.r != partition.n) {
    throw ValidationError("code_to_mols needs classes of size n = " + std::to_string(partition.n) +
                          ", got r = " + std::to_string(partition.r));
  }
  std::vector<LatinSquare> squares;
  squares.reserve(partition.m);
  for (const auto& cls : partition.classes) {
    std::vector<std::vector<Point>> rows(partition.n, std::vector<Point>(partition.n));
    for (const auto& w : cls)
      for (std::size_t i = 0; i < partition.n; ++i) rows[i][w[i]] = w[0];
    squares.emplace_back(std::move(rows));
  }
  return MolsSet(std::move(squares));
}

PermutationCode mols_to_code(const MolsSet& mols) {
  std::vector<Permutation> words;
  const auto n = mols.order();
  for (const auto& sq : mols.squares()) {
    std::vector<std::vector<Point>> cells(n, std::vector<Point>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cells[sq.at(i, j)][i] = static_cast<Point>(j);
    for (auto& c : cells) words.push_back(Permutation::from_images(std::move(c)));
  }
  return PermutationCode(mols.order(), std::move(words));
}

std::size_t macneish_bound(std::size_t n) {
  if (n < 2) throw ValidationError("macneish_bound needs n >= 2");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::size_t rest = n;
  for (std::size_t p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    std::size_t q = 1;
    while (rest % p == 0) {
      rest /= p;
      q *= p;
    }
    best = std::min(best, q);
  }
  if (rest > 1) best = std::min(best, rest);
  return best - 1;
}

// ---------------------------------------------------------------------------
// Latin square I/O

namespace {

LatinSquare square_from_one_based(const std::vector<std::vector<long long>>& rows) {
  const auto n = rows.size();
  std::vector<std::vector<Point>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto v : rows[i]) {
      if (v < 1 || static_cast<std::size_t>(v) > n) {
        throw ParseError("symbol " + std::to_string(v) + " outside 1.." + std::to_string(n));
      }
      out[i].push_back(static_cast<Point>(v - 1));
    }
  }
  return LatinSquare(std::move(out));
}

}  // namespace

std::string mols_to_json(const MolsSet& mols) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& sq : mols.squares()) {
    nlohmann::json matrix = nlohmann::json::array();
    for (const auto& row : sq.rows()) {
      nlohmann::json r = nlohmann::json::array();
      for (auto v : row) r.push_back(v + 1);
      matrix.push_back(std::move(r));
    }
    doc.push_back(std::move(matrix));
  }
  return doc.dump() + "\n";
}

MolsSet mols_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("Latin square JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("Latin square JSON: expected an array of matrices");
  std::vector<LatinSquare> squares;
  try {
    for (const auto& matrix : doc) squares.push_back(square_from_one_based(matrix.get<std::vector<std::vector<long long>>>()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("Latin square JSON: ") + e.what());
  }
  return MolsSet(std::move(squares));
}

std::string mols_to_text(const MolsSet& mols) {
  std::string out;
  for (std::size_t s = 0; s < mols.size(); ++s) {
    if (s) out += '\n';
    for (const auto& row : mols.squares()[s].rows()) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out += ' ';
        out += std::to_string(row[j] + 1);
      }
      out += '\n';
    }
  }
  return out;
}

MolsSet mols_from_text(std::string_view text) {
  std::vector<LatinSquare> squares;
  std::vector<std::vector<long long>> current;
  std::istringstream in{std::string(text)};
  std::string line;
  auto flush = [&] {
    if (!current.empty()) squares.push_back(square_from_one_based(current));
    current.clear();
  };
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<long long> row;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw ParseError("bad symbol '" + tok + "'");
      } catch (const std::logic_error&) {
        throw ParseError("bad symbol '" + tok + "'");
      }
    }
    if (row.empty()) {
      flush();
    } else {
      current.push_back(std::move(row));
    }
  }
  flush();
  return MolsSet(std::move(squares));
}

}  // namespace molskit
