#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "molskit/codes.hpp"
#include "molskit/isometry.hpp"

namespace molskit {

/// One U-orbit that may take part in a separable union.
struct OrbitCandidate {
  /// Least word of the orbit.
  Permutation representative;
  /// Sorted orbit.
  std::vector<Permutation> words;
  SeparabilityPartition internal_partition;
  std::size_t stabilizer_order = 1;
};

struct SearchConfig {
  IsoGroup group;
  /// Only representatives fixed by every element are enumerated.
  std::vector<IsoElement> required_stabilizer;
  std::optional<std::size_t> target_m;
  std::vector<Permutation> seed_orbits;
  std::size_t node_limit = 100'000'000;
  std::size_t workers = 1;
  /// Resumable state file for backtrack_join; written every checkpoint_interval nodes.
  std::optional<std::filesystem::path> checkpoint;
  std::size_t checkpoint_interval = 1'000'000;
};

struct EnumerationResult {
  std::vector<OrbitCandidate> candidates;
  std::size_t nodes = 0;
  bool complete = true;
};

/// Visits every b in S_n with act(b, s) = b for all s, by backtracking over
/// the images of b with the constraints the stabilizer imposes propagated
/// after each choice. Returns false if the node limit stopped it.
bool enumerate_fixed_points(std::size_t n, std::span<const IsoElement> stabilizer,
                            std::size_t node_limit,
                            const std::function<void(const Permutation&)>& visit,
                            std::size_t* nodes_used = nullptr);

/// Candidate orbits from the seeds, the universe (when given) and, when a
/// stabilizer is required or nothing else is given, from the fixed points
/// of the stabilizer. Orbits below distance n-1 or not separable are
/// dropped. Sorted by size descending, then representative.
EnumerationResult enumerate_orbits(const SearchConfig& config,
                                   std::optional<std::span<const Permutation>> universe = std::nullopt);

/// Builds a single candidate; nullopt if the orbit is not admissible.
std::optional<OrbitCandidate> make_candidate(const Permutation& representative, const IsoGroup& group);

/// True iff the union of two disjoint orbits keeps distances in {n-1, n}
/// and the distance-n relation an equivalence with classes of at most n words.
bool compatible(const OrbitCandidate& a, const OrbitCandidate& b);

struct SearchResult {
  PermutationCode code;
  std::optional<SeparabilityPartition> partition;
  std::size_t m = 0;
  /// Indices into the (sorted) candidate list.
  std::vector<std::size_t> chosen;
  std::size_t nodes = 0;
  bool complete = true;
};

/// Depth-first search over candidate subsets for the (n, m)-separable union
/// with classes of size n and maximal m. Candidates are re-sorted by size
/// descending then representative. The result is verified before returning
/// and does not depend on the worker count.
SearchResult backtrack_join(std::vector<OrbitCandidate> candidates, const SearchConfig& config);

}  // namespace molskit
