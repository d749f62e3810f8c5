#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molskit/permutation.hpp"

namespace molskit {

using ElementIndex = std::uint32_t;

/// A finite group given by its multiplication table over element indices
/// 0..order-1. Groups built by cyclic/direct_product enumerate residue
/// tuples lexicographically, so the identity is always index 0.
class FiniteGroup {
public:
  /// `table[a * order + b]` is the index of a*b. Throws ValidationError if
  /// the table is not a group with the given identity.
  FiniteGroup(std::vector<std::vector<int>> labels, std::vector<ElementIndex> table,
              ElementIndex identity, std::vector<int> moduli = {});

  std::size_t order() const noexcept { return labels_.size(); }
  ElementIndex identity() const noexcept { return identity_; }
  ElementIndex mul(ElementIndex a, ElementIndex b) const noexcept { return table_[a * order() + b]; }
  ElementIndex inv(ElementIndex a) const noexcept { return inverses_[a]; }

  const std::vector<int>& label(ElementIndex a) const { return labels_[a]; }
  /// "3" for cyclic groups, "(1,4)" for products.
  std::string format_element(ElementIndex a) const;
  /// Inverse of format_element. Throws ParseError.
  ElementIndex parse_element(std::string_view text) const;

  /// Residue moduli for groups built from cyclic factors, empty otherwise.
  const std::vector<int>& moduli() const noexcept { return moduli_; }
  /// "Z3xZ21" style description, or "table<order>" for other groups.
  std::string spec() const;

  bool is_abelian() const;
  std::size_t element_order(ElementIndex a) const;
  /// Sorted list of element orders; determines an abelian group up to isomorphism.
  std::vector<std::size_t> order_profile() const;

private:
  std::vector<std::vector<int>> labels_;
  std::vector<ElementIndex> table_;
  std::vector<ElementIndex> inverses_;
  ElementIndex identity_;
  std::vector<int> moduli_;
};

/// Z_m under addition.
FiniteGroup cyclic(int m);
FiniteGroup direct_product(std::span<const FiniteGroup> factors);
/// Parses "Z35", "Z6xZ2xZ2xZ2", ... Throws ParseError.
FiniteGroup parse_group_spec(std::string_view spec);

/// gamma_j : g_k -> g_k * g_j as a permutation of indices, for j = 0..n-1.
/// gamma_0 is the identity.
std::vector<Permutation> regular_representation(const FiniteGroup& group);

/// The multiplication table of a regular permutation group, labelling each
/// element by the image of point 1. Throws ValidationError if the group is
/// not regular (closed, transitive, order equal to degree).
FiniteGroup group_from_regular_permutations(std::span<const Permutation> elements);

/// True iff `elements` is a regular permutation group isomorphic to the
/// abelian group `group`. Isomorphism of abelian groups is decided by the
/// element-order profile.
bool is_regular_copy_of(std::span<const Permutation> elements, const FiniteGroup& group);

}  // namespace molskit
