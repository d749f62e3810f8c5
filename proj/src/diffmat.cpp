#include "molskit/diffmat.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "molskit/error.hpp"

namespace molskit {

namespace {

/// g_1..g_n: identity first, then the remaining indices in order.
std::vector<ElementIndex> enumeration(const FiniteGroup& g) {
  std::vector<ElementIndex> out{g.identity()};
  for (ElementIndex a = 0; a < g.order(); ++a)
    if (a != g.identity()) out.push_back(a);
  return out;
}

/// Right multiplication by element j, as a permutation of element indices.
Permutation right_translation(const FiniteGroup& g, ElementIndex j) {
  std::vector<Point> images(g.order());
  for (ElementIndex k = 0; k < g.order(); ++k) images[k] = static_cast<Point>(g.mul(k, j));
  return Permutation::from_images(std::move(images));
}

bool is_prop1_normalized(const DifferenceMatrix& dm) {
  const auto& g = dm.group();
  if (dm.row_count() < 2) return false;
  const auto order = enumeration(g);
  for (std::size_t k = 0; k < dm.column_count(); ++k) {
    if (dm.at(0, k) != g.identity() || dm.at(1, k) != order[k]) return false;
  }
  return true;
}

}  // namespace

DifferenceMatrix::DifferenceMatrix(FiniteGroup group, std::size_t lambda,
                                   std::vector<std::vector<ElementIndex>> rows)
    : group_(std::move(group)), lambda_(lambda), rows_(std::move(rows)) {
  if (lambda_ == 0) throw ValidationError("difference matrix lambda must be positive");
  if (rows_.empty()) throw ValidationError("difference matrix has no rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != column_count()) {
      throw ValidationError("difference matrix row " + std::to_string(i) + " has " +
                            std::to_string(rows_[i].size()) + " entries, expected lambda*|G| = " +
                            std::to_string(column_count()));
    }
    for (auto v : rows_[i]) {
      if (v >= group_.order()) throw ValidationError("difference matrix entry out of range");
    }
  }
}

DmReport verify_dm(const DifferenceMatrix& dm) {
  const auto& g = dm.group();
  std::vector<std::size_t> counts(g.order());
  for (std::size_t i = 0; i < dm.row_count(); ++i) {
    for (std::size_t j = 0; j < dm.row_count(); ++j) {
      if (i == j) continue;
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t k = 0; k < dm.column_count(); ++k) ++counts[g.mul(g.inv(dm.at(i, k)), dm.at(j, k))];
      for (ElementIndex e = 0; e < g.order(); ++e) {
        if (counts[e] != dm.lambda()) return {false, DmWitness{i, j, e, counts[e]}};
      }
    }
  }
  return {true, std::nullopt};
}

NormalizedDm normalize_dm(const DifferenceMatrix& dm) {
  if (auto report = verify_dm(dm); !report.ok) {
    throw ValidationError("normalize_dm: input is not a difference matrix (rows " +
                          std::to_string(report.witness->row_i) + ", " +
                          std::to_string(report.witness->row_j) + ")");
  }
  const auto& g = dm.group();
  auto rows = dm.rows();
  for (std::size_t k = 0; k < dm.column_count(); ++k) {
    const auto left = g.inv(rows[0][k]);
    for (auto& row : rows) row[k] = g.mul(left, row[k]);
  }
  if (dm.lambda() != 1 || rows.size() < 2) {
    return {DifferenceMatrix(g, dm.lambda(), std::move(rows)), dm.lambda() == 1};
  }

  // Row 1 now holds every element once; order the columns by its enumeration position.
  const auto order = enumeration(g);
  std::vector<std::size_t> position(g.order());
  for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;
  std::vector<std::size_t> perm(dm.column_count());
  for (std::size_t k = 0; k < perm.size(); ++k) perm[position[rows[1][k]]] = k;
  for (auto& row : rows) {
    std::vector<ElementIndex> sorted(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) sorted[k] = row[perm[k]];
    row = std::move(sorted);
  }
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const auto right = g.inv(rows[i][0]);
    for (auto& v : rows[i]) v = g.mul(v, right);
  }
  std::sort(rows.begin() + 2, rows.end());
  return {DifferenceMatrix(g, 1, std::move(rows)), true};
}

PermutationCode dm_to_code(const DifferenceMatrix& dm) {
  if (dm.lambda() != 1) {
    throw ValidationError("dm_to_code: lambda = " + std::to_string(dm.lambda()) +
                          " matrices are verifiable but not convertible");
  }
  if (auto report = verify_dm(dm); !report.ok) throw ValidationError("dm_to_code: input does not verify");
  if (!is_prop1_normalized(dm)) {
    throw ValidationError("dm_to_code: matrix is not normalized (row 0 identity, row 1 the enumeration)");
  }
  const auto& g = dm.group();
  const auto n = g.order();
  const auto order = enumeration(g);

  std::vector<Permutation> translations;
  translations.reserve(n);
  for (auto j : order) translations.push_back(right_translation(g, j));

  std::vector<Permutation> words;
  words.reserve((dm.row_count() - 1) * n);
  for (std::size_t i = 1; i < dm.row_count(); ++i) {
    std::vector<Point> images(n);
    for (std::size_t k = 0; k < n; ++k) images[order[k]] = static_cast<Point>(dm.at(i, k));
    const auto theta = Permutation::from_images(std::move(images));
    for (const auto& gamma : translations) words.push_back(compose(theta, gamma));
  }
  return PermutationCode(n, std::move(words));
}

DifferenceMatrix code_to_dm(const PermutationCode& code, const FiniteGroup& group) {
  const auto n = group.order();
  if (code.n() != n) {
    throw ValidationError("code_to_dm: code length " + std::to_string(code.n()) +
                          " differs from |G| = " + std::to_string(n));
  }
  if (code.size() == 0 || code.size() % n != 0) {
    throw ValidationError("code_to_dm: code size " + std::to_string(code.size()) +
                          " is not a multiple of |G|");
  }
  std::unordered_set<Permutation, PermutationHash> words(code.words().begin(), code.words().end());
  if (!words.contains(Permutation(n))) {
    throw ValidationError("code_to_dm: missing trivial coset (identity not in the code)");
  }
  std::vector<Permutation> translations;
  for (ElementIndex j = 0; j < n; ++j) translations.push_back(right_translation(group, j));
  for (const auto& w : code.words()) {
    for (const auto& gamma : translations) {
      if (!words.contains(compose(w, gamma))) {
        throw ValidationError("code_to_dm: not a union of R(G)-cosets, " + format_cycles(w) +
                              " composed with " + format_cycles(gamma) + " is missing");
      }
    }
  }

  // Coset representative: the member fixing the identity element.
  const auto e = group.identity();
  std::vector<Permutation> reps;
  for (const auto& w : code.words()) {
    if (w[e] != e) continue;
    reps.push_back(w);
  }
  std::sort(reps.begin(), reps.end());
  const auto order = enumeration(group);
  std::vector<std::vector<ElementIndex>> rows;
  rows.emplace_back(n, e);
  rows.emplace_back(order.begin(), order.end());
  std::vector<std::vector<ElementIndex>> others;
  for (const auto& theta : reps) {
    if (theta.is_identity()) continue;
    std::vector<ElementIndex> row(n);
    for (std::size_t k = 0; k < n; ++k) row[k] = theta[order[k]];
    others.push_back(std::move(row));
  }
  std::sort(others.begin(), others.end());
  rows.insert(rows.end(), others.begin(), others.end());

  DifferenceMatrix dm(group, 1, std::move(rows));
  if (auto report = verify_dm(dm); !report.ok) {
    const auto& w = *report.witness;
    throw ValidationError("code_to_dm: distance violation between cosets " + std::to_string(w.row_i) +
                          " and " + std::to_string(w.row_j) + " (quotient " +
                          group.format_element(w.element) + " occurs " + std::to_string(w.count) +
                          " times)");
  }
  return dm;
}

// ---------------------------------------------------------------------------

std::string write_dm(const DifferenceMatrix& dm) {
  const auto& g = dm.group();
  if (g.moduli().empty()) throw ValidationError("write_dm: group has no Z<m>x... description");
  std::string out = "group=" + g.spec() + " lambda=" + std::to_string(dm.lambda()) +
                    " rows=" + std::to_string(dm.row_count()) +
                    " cols=" + std::to_string(dm.column_count()) + "\n";
  for (const auto& row : dm.rows()) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ' ';
      out += g.format_element(row[k]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> element_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (line[i] == '(') {
      while (i < line.size() && line[i] != ')') ++i;
      if (i == line.size()) throw ParseError("DM file: unterminated tuple");
      ++i;
    } else {
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    }
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string header_value(const std::string& header, const std::string& key) {
  std::istringstream in(header);
  std::string tok;
  while (in >> tok) {
    if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
  }
  throw ParseError("DM file: header lacks " + key + "=");
}

std::size_t header_number(const std::string& header, const std::string& key) {
  const auto text = header_value(header, key);
  try {
    std::size_t used = 0;
    const auto v = std::stoul(text, &used);
    if (used != text.size()) throw ParseError("DM file: bad " + key);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("DM file: bad " + key + "=" + text);
  }
}

}  // namespace

DifferenceMatrix read_dm(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string header;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    header = line;
    break;
  }
  if (header.empty()) throw ParseError("DM file: missing header");
  auto group = parse_group_spec(header_value(header, "group"));
  const auto lambda = header_number(header, "lambda");
  const auto row_count = header_number(header, "rows");
  const auto cols = header_number(header, "cols");

  std::vector<std::vector<ElementIndex>> rows;
  while (std::getline(in, line)) {
    const auto toks = element_tokens(line);
    if (toks.empty() || toks.front().front() == '#') continue;
    std::vector<ElementIndex> row;
    for (const auto& t : toks) row.push_back(group.parse_element(t));
    if (row.size() != cols) {
      throw ParseError("DM file: row " + std::to_string(rows.size()) + " has " +
                       std::to_string(row.size()) + " entries, header says " + std::to_string(cols));
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() != row_count) {
    throw ParseError("DM file: " + std::to_string(rows.size()) + " rows, header says " +
                     std::to_string(row_count));
  }
  if (cols != lambda * group.order()) throw ParseError("DM file: cols must equal lambda*|G|");
  return DifferenceMatrix(std::move(group), lambda, std::move(rows));
}

}  // namespace molskit
