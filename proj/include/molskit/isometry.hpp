#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "molskit/groups.hpp"
#include "molskit/permutation.hpp"

namespace molskit {

/// An isometry of (S_n, Hamming) realised inside S_2n: the lower block
/// {0..n-1} carries the left factor, the upper block {n..2n-1} the right
/// factor, and a block swap stands for inversion.
class IsoElement {
public:
  /// Throws ValidationError unless `inner` has even degree and either
  /// preserves both blocks or swaps them.
  explicit IsoElement(Permutation inner);

  static IsoElement identity(std::size_t n);
  /// t_n = (1, n+1)(2, n+2)...(n, 2n).
  static IsoElement block_swap_involution(std::size_t n);
  /// (lower on 1..n) * (upper shifted to n+1..2n) * t_n^swap.
  static IsoElement from_parts(const Permutation& lower, const Permutation& upper, bool swap);

  std::size_t n() const noexcept { return inner_.degree() / 2; }
  const Permutation& inner() const noexcept { return inner_; }
  bool block_swap() const noexcept { return block_swap_; }

  struct Parts {
    Permutation lower;
    Permutation upper;
    bool swap = false;
  };
  Parts decompose() const;

  bool operator==(const IsoElement& other) const { return inner_ == other.inner_; }
  auto operator<=>(const IsoElement& other) const { return inner_ <=> other.inner_; }

private:
  Permutation inner_;
  bool block_swap_ = false;
};

struct IsoElementHash {
  std::size_t operator()(const IsoElement& g) const noexcept { return PermutationHash{}(g.inner()); }
};

IsoElement operator*(const IsoElement& g, const IsoElement& h);
IsoElement inverse(const IsoElement& g);

/// The right action b * g on codewords: with g = lower*upper*t^swap,
/// c = lower^-1 * b * phi(upper), inverted when swap is set.
Permutation act(const Permutation& b, const IsoElement& g);

/// B_2 -> S_n, shifting labels down by n. The input must fix 1..n pointwise.
Permutation phi(const Permutation& upper_block_element);

/// Embeds a degree-m permutation into the lower block of Iso(n), m <= n.
IsoElement embed_phi(const Permutation& p, std::size_t n);

/// v * v^(t_n): v acting on both blocks simultaneously.
IsoElement diagonal(const Permutation& v);

/// Delta(V) for a subgroup V of S_n. Throws ValidationError if V is not
/// closed under composition or lacks the identity.
std::vector<IsoElement> delta(std::span<const Permutation> subgroup);

/// A subgroup of Iso(n) given by generators, optionally materialised.
class IsoGroup {
public:
  IsoGroup(std::size_t n, std::vector<IsoElement> generators);

  std::size_t n() const noexcept { return n_; }
  const std::vector<IsoElement>& generators() const noexcept { return generators_; }
  bool materialized() const noexcept { return elements_.has_value(); }
  /// Throws std::logic_error if the group was not materialised.
  const std::vector<IsoElement>& elements() const;
  std::optional<std::size_t> order() const noexcept;
  bool contains(const IsoElement& g) const;

private:
  friend IsoGroup generate_group(std::vector<IsoElement>, std::size_t);

  std::size_t n_;
  std::vector<IsoElement> generators_;
  std::optional<std::vector<IsoElement>> elements_;
};

constexpr std::size_t kDefaultGroupLimit = 10'000'000;

/// BFS closure; element order is BFS insertion order with generators applied
/// in sorted order. Throws LimitExceeded with the partial count.
IsoGroup generate_group(std::vector<IsoElement> generators, std::size_t limit = kDefaultGroupLimit);

/// b * U, in BFS discovery order.
std::vector<Permutation> orbit(const Permutation& b, std::span<const IsoElement> generators);
std::vector<Permutation> orbit(const Permutation& b, const IsoGroup& group);

/// Partition of a U-invariant set into U-orbits, sorted by size descending
/// then by least element. Each orbit is sorted. Throws ValidationError if
/// the set is not invariant.
std::vector<std::vector<Permutation>> orbit_split(std::span<const Permutation> set,
                                                  const IsoGroup& group);

bool is_stabilized(const Permutation& b, std::span<const IsoElement> subgroup);

/// Elements of a materialised group that fix b.
std::vector<IsoElement> stabilizer(const Permutation& b, const IsoGroup& group);

/// V such that Delta(V) = U ∩ Delta(S_n), for a materialised U.
std::vector<Permutation> diagonal_part(const IsoGroup& group);

struct RegularDiagonalResult {
  /// Elements of W, empty if none was found.
  std::vector<IsoElement> elements;
  std::size_t nodes = 0;
  bool complete = true;
};

/// Searches a materialised U for an abelian subgroup W isomorphic to G whose
/// projections to both blocks are regular, i.e. a B1xB2-conjugate of
/// Delta(Phi(R(G))). Abelian G only.
RegularDiagonalResult find_regular_diagonal_subgroup(const IsoGroup& group, const FiniteGroup& target,
                                                     std::size_t node_limit = 1'000'000);

}  // namespace molskit
