#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molskit/codes.hpp"
#include "molskit/groups.hpp"
#include "molskit/isometry.hpp"

namespace molskit {

struct NamedPermutation {
  std::string name;
  Permutation perm;
};

struct Expectations {
  std::optional<std::size_t> group_order;
  std::optional<std::size_t> diagonal_index;
  /// Multisets, kept sorted descending.
  std::vector<std::size_t> orbit_sizes;
  std::vector<std::size_t> base_split;
  std::optional<std::size_t> code_size;
  std::optional<std::size_t> min_distance;
  std::optional<std::size_t> r;
  std::optional<std::size_t> m;
};

/// A parsed dataset or code file. See docs/dataset-format.md.
struct Dataset {
  std::string name;
  std::size_t n = 0;
  /// Group whose regular copy the base entries generate.
  std::optional<std::string> group_spec;
  /// Group that U must contain as a regular diagonal subgroup (up to conjugacy).
  std::optional<std::string> diagonal_group_spec;
  /// Degree n generators of E_G.
  std::vector<NamedPermutation> base;
  /// Degree 2n generators of U (without the Delta(E_G) part).
  std::vector<NamedPermutation> generators;
  std::vector<NamedPermutation> representatives;
  /// Explicit codewords, kept in file order (duplicates included).
  std::vector<NamedPermutation> words;
  bool include_base = false;
  Expectations expected;
};

/// Throws ParseError with a line number, or ValidationError for block or
/// degree violations.
Dataset parse_dataset(std::string_view text, std::string name = "<input>");

/// MOLSKIT_DATA if set, else the data directory of the source tree.
std::filesystem::path data_directory();

/// A shipped name (n14, n20, n21, n35, n48, n56, n63, n96) or a file path.
Dataset load_dataset(const std::string& name_or_path);

struct RepresentativeOrbit {
  std::string name;
  std::vector<Permutation> words;
};

struct AssembledCode {
  std::size_t n = 0;
  /// Materialised U, absent for plain code files.
  std::optional<IsoGroup> group;
  std::vector<RepresentativeOrbit> orbits;
  /// E_G as a sorted set, and its split into U-orbits.
  std::vector<Permutation> base_elements;
  std::vector<std::vector<Permutation>> base_split;
  std::optional<std::size_t> diagonal_index;
  PermutationCode code;
};

/// Builds U (with Delta(E_G) prepended when a group is named), unions the
/// representative orbits, E_G and explicit words, and checks group order,
/// orbit sizes, base split, diagonal index and code size against the file.
/// Throws ValidationError listing every mismatch.
AssembledCode assemble_code(const Dataset& ds);

struct DoubleCosetReport {
  std::size_t h_order = 0;
  std::size_t k_order = 0;
  /// The orbit equals H * b * K.
  bool equal = false;
};

/// H and K are the lower and upper projections of the block-preserving part of U.
DoubleCosetReport double_coset(const IsoGroup& group, const Permutation& b,
                               std::span<const Permutation> orbit);

/// A code file: header and one `word` entry per codeword.
std::string write_code_file(const PermutationCode& code, std::string_view comment = {});

}  // namespace molskit
