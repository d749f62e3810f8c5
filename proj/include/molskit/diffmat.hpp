#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molskit/codes.hpp"
#include "molskit/groups.hpp"

namespace molskit {

/// A (G, m+1; lambda) difference matrix: m+1 rows (numbered 0..m) of
/// lambda*|G| group elements, stored as indices into G's enumeration.
class DifferenceMatrix {
public:
  /// Throws ValidationError if the row lengths differ from lambda*|G| or an
  /// entry is not an element index.
  DifferenceMatrix(FiniteGroup group, std::size_t lambda,
                   std::vector<std::vector<ElementIndex>> rows);

  const FiniteGroup& group() const noexcept { return group_; }
  std::size_t lambda() const noexcept { return lambda_; }
  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t column_count() const noexcept { return lambda_ * group_.order(); }
  const std::vector<std::vector<ElementIndex>>& rows() const noexcept { return rows_; }
  ElementIndex at(std::size_t row, std::size_t col) const { return rows_[row][col]; }

  bool operator==(const DifferenceMatrix& other) const {
    return lambda_ == other.lambda_ && rows_ == other.rows_ &&
           group_.order() == other.group_.order() && group_.spec() == other.group_.spec();
  }

private:
  FiniteGroup group_;
  std::size_t lambda_;
  std::vector<std::vector<ElementIndex>> rows_;
};

struct DmWitness {
  std::size_t row_i = 0;
  std::size_t row_j = 0;
  ElementIndex element = 0;
  std::size_t count = 0;
};

struct DmReport {
  bool ok = false;
  /// First row pair whose quotient multiset misses lambda for some element.
  std::optional<DmWitness> witness;
};

/// Checks that { d_ik^-1 d_jk : k } covers G exactly lambda times for all i != j.
DmReport verify_dm(const DifferenceMatrix& dm);

struct NormalizedDm {
  DifferenceMatrix matrix;
  /// False when only the row-0 step applied (lambda > 1).
  bool complete = false;
};

/// Row 0 becomes all-identity (left-multiplying columns). For lambda = 1 the
/// columns are then ordered so row 1 enumerates G, every later row is
/// right-multiplied to start with the identity, and rows 2..m are sorted.
/// Throws ValidationError if the input does not verify.
NormalizedDm normalize_dm(const DifferenceMatrix& dm);

/// The code  union_i  theta_i R(G)  with g_k^theta_i = d_ik for rows 1..m of a
/// normalised lambda = 1 matrix; m*|G| words of degree |G|.
PermutationCode dm_to_code(const DifferenceMatrix& dm);

/// Inverse of dm_to_code: the code must contain R(G), be invariant under
/// right composition with R(G), and split into cosets pairwise at distance
/// |G|-1. Returns the normalised matrix. Throws ValidationError naming the
/// failing condition.
DifferenceMatrix code_to_dm(const PermutationCode& code, const FiniteGroup& group);

/// Header `group=<spec> lambda=<l> rows=<m+1> cols=<n>`, then one row per line.
std::string write_dm(const DifferenceMatrix& dm);
DifferenceMatrix read_dm(std::string_view text);

}  // namespace molskit
