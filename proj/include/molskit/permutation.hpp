#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molskit {

/// Internal point label (0-based). Degrees up to 65535 are supported.
using Point = std::uint16_t;

/// A bijection of {0..n-1}, stored as its image array. All text I/O is
/// 1-based; see parse_cycles / format_cycles.
class Permutation {
public:
  Permutation() = default;

  /// Identity of the given degree.
  explicit Permutation(std::size_t degree);

  /// Throws ValidationError unless `images` is a bijection of {0..n-1}.
  static Permutation from_images(std::vector<Point> images);

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator[](std::size_t i) const noexcept { return images_[i]; }
  std::span<const Point> images() const noexcept { return images_; }

  bool is_identity() const noexcept;
  std::size_t fixed_points() const noexcept;
  std::size_t order() const;

  bool operator==(const Permutation&) const = default;
  /// Lexicographic on image arrays (degree first); the orbit canonical order.
  std::strong_ordering operator<=>(const Permutation& other) const;

private:
  struct Unchecked {};
  Permutation(std::vector<Point> images, Unchecked) : images_(std::move(images)) {}

  std::vector<Point> images_;

  friend Permutation compose(const Permutation&, const Permutation&);
  friend Permutation inverse(const Permutation&);
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

/// "Apply p, then q": i -> q[p[i]]. Matches the right-action convention
/// x^(pq) = (x^p)^q of cycle-notation group software.
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);

/// Number of points where p and q disagree.
std::size_t hamming_distance(const Permutation& p, const Permutation& q);

/// Minimum distance over distinct pairs. Throws ValidationError on fewer than
/// two words; duplicated words give 0.
std::size_t min_distance(std::span<const Permutation> code);

/// Minimum over the cross pairs S x T.
std::size_t set_distance(std::span<const Permutation> s, std::span<const Permutation> t);

/// Disjoint-cycle notation, e.g. "(1, 2, 3)(4, 5)" or "Id". Whitespace,
/// including newlines, may appear between tokens.
Permutation parse_cycles(std::string_view text, std::size_t degree);

/// Canonical cycle notation: cycles ordered by least point, each starting
/// at its least point, fixed points omitted, identity as "Id".
std::string format_cycles(const Permutation& p);

/// Closure of a set of permutations under composition (BFS from the
/// identity, generators applied in sorted order). Throws LimitExceeded.
std::vector<Permutation> generate_closure(std::vector<Permutation> generators,
                                          std::size_t limit = 10'000'000);

}  // namespace molskit
