#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molskit/permutation.hpp"

namespace molskit {

/// A set of degree-n permutations without repetitions.
class PermutationCode {
public:
  PermutationCode() = default;
  /// Throws ValidationError on mixed degrees or a repeated word.
  PermutationCode(std::size_t n, std::vector<Permutation> words);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<Permutation>& words() const noexcept { return words_; }

private:
  std::size_t n_ = 0;
  std::vector<Permutation> words_;
};

struct WitnessPair {
  Permutation first;
  Permutation second;
  std::size_t distance = 0;
};

struct PaReport {
  std::size_t size = 0;
  std::size_t min_distance = 0;
  bool ok = false;
  /// A pair realising the minimum distance.
  std::optional<WitnessPair> witness;
};

/// Checks that the words form an (n, d)-PA. Repeated words count as
/// distance 0. Throws ValidationError for fewer than two words.
PaReport verify_pa(std::span<const Permutation> words, std::size_t d);

/// Classes L_1..L_m of size r: distance n inside a class, n-1 across.
struct SeparabilityPartition {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t m = 0;
  /// Each class sorted; classes ordered by their least word.
  std::vector<std::vector<Permutation>> classes;
};

/// Builds the distance-n relation and checks it is an equivalence with
/// classes of one size and cross distance n-1. Throws ValidationError naming
/// a witness pair otherwise.
SeparabilityPartition separability_partition(std::span<const Permutation> words);

class LatinSquare {
public:
  /// Rows of 0-based symbols. Throws ValidationError unless Latin.
  explicit LatinSquare(std::vector<std::vector<Point>> rows);

  std::size_t order() const noexcept { return rows_.size(); }
  Point at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  const std::vector<std::vector<Point>>& rows() const noexcept { return rows_; }

  bool operator==(const LatinSquare&) const = default;

private:
  std::vector<std::vector<Point>> rows_;
};

/// True iff superimposing the squares yields all n^2 ordered pairs.
bool verify_orthogonal(const LatinSquare& a, const LatinSquare& b);

class MolsSet {
public:
  /// Throws ValidationError if two squares are not orthogonal, or orders differ.
  explicit MolsSet(std::vector<LatinSquare> squares);

  std::size_t order() const noexcept { return squares_.empty() ? 0 : squares_.front().order(); }
  std::size_t size() const noexcept { return squares_.size(); }
  const std::vector<LatinSquare>& squares() const noexcept { return squares_; }

private:
  std::vector<LatinSquare> squares_;
};

/// One square per class (requires r = n). The class word sigma with
/// sigma(1) = s marks the cells of symbol s: L[i][sigma(i)] = s.
MolsSet code_to_mols(const SeparabilityPartition& partition);

/// Inverse of code_to_mols: symbol s of a square gives the word i -> column of s in row i.
PermutationCode mols_to_code(const MolsSet& mols);

/// min(q_i) - 1 over the prime-power factorisation of n >= 2.
std::size_t macneish_bound(std::size_t n);

/// JSON: array of n x n matrices with 1-based symbols.
std::string mols_to_json(const MolsSet& mols);
MolsSet mols_from_json(std::string_view text);
/// Text: space-separated 1-based rows, a blank line between squares.
std::string mols_to_text(const MolsSet& mols);
MolsSet mols_from_text(std::string_view text);

}  // namespace molskit
