#include "molskit/isometry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "molskit/error.hpp"

namespace molskit {

namespace {

Permutation shift_block(const Permutation& p, std::size_t n, std::size_t lower_offset,
                        const Permutation& upper, std::size_t upper_offset) {
  std::vector<Point> images(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    images[lower_offset + i] = static_cast<Point>(lower_offset + p[i]);
    images[upper_offset + i] = static_cast<Point>(upper_offset + upper[i]);
  }
  return Permutation::from_images(std::move(images));
}

}  // namespace

IsoElement::IsoElement(Permutation inner) : inner_(std::move(inner)) {
  const auto deg = inner_.degree();
  if (deg == 0 || deg % 2 != 0) {
    throw ValidationError("isometry element needs even positive degree, got " + std::to_string(deg));
  }
  const auto half = deg / 2;
  block_swap_ = inner_[0] >= half;
  for (std::size_t i = 0; i < deg; ++i) {
    const bool from_upper = i >= half;
    const bool to_upper = inner_[i] >= half;
    if ((from_upper != to_upper) != block_swap_) {
      throw ValidationError("permutation " + format_cycles(inner_) +
                            " does not respect the block structure of Iso(" +
                            std::to_string(half) + ") (point " + std::to_string(i + 1) + ")");
    }
  }
}

IsoElement IsoElement::identity(std::size_t n) { return IsoElement(Permutation(2 * n)); }

IsoElement IsoElement::block_swap_involution(std::size_t n) {
  std::vector<Point> images(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    images[i] = static_cast<Point>(i + n);
    images[i + n] = static_cast<Point>(i);
  }
  return IsoElement(Permutation::from_images(std::move(images)));
}

IsoElement IsoElement::from_parts(const Permutation& lower, const Permutation& upper, bool swap) {
  if (lower.degree() != upper.degree()) throw DegreeMismatch("from_parts: block degrees differ");
  const auto n = lower.degree();
  IsoElement g(shift_block(lower, n, 0, upper, n));
  return swap ? g * block_swap_involution(n) : g;
}

IsoElement::Parts IsoElement::decompose() const {
  const auto n_ = n();
  // Strip t_n on the right: g * t_n preserves both blocks when g swaps.
  const Permutation base = block_swap_ ? compose(inner_, block_swap_involution(n_).inner()) : inner_;
  std::vector<Point> lower(n_), upper(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    lower[i] = base[i];
    upper[i] = static_cast<Point>(base[i + n_] - n_);
  }
  return {Permutation::from_images(std::move(lower)), Permutation::from_images(std::move(upper)),
          block_swap_};
}

IsoElement operator*(const IsoElement& g, const IsoElement& h) {
  return IsoElement(compose(g.inner(), h.inner()));
}

IsoElement inverse(const IsoElement& g) { return IsoElement(inverse(g.inner())); }

Permutation act(const Permutation& b, const IsoElement& g) {
  if (b.degree() != g.n()) {
    throw DegreeMismatch("act: codeword degree " + std::to_string(b.degree()) +
                         " vs isometry of degree " + std::to_string(g.n()));
  }
  const auto n = b.degree();
  const auto& inner = g.inner();
  // c = lower^-1 * b * upper, computed pointwise without materialising parts.
  // With base = g (or g * t when swapping): lower = base|lower, upper = base|upper - n.
  std::vector<Point> lower(n), upper(n);
  if (!g.block_swap()) {
    for (std::size_t i = 0; i < n; ++i) {
      lower[i] = inner[i];
      upper[i] = static_cast<Point>(inner[i + n] - n);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      lower[i] = static_cast<Point>(inner[i] - n);
      upper[i] = inner[i + n];
    }
  }
  std::vector<Point> c(n);
  // (lower^-1 b upper)(lower[i]) = upper[b[i]]
  for (std::size_t i = 0; i < n; ++i) c[lower[i]] = upper[b[i]];
  if (g.block_swap()) {
    std::vector<Point> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[c[i]] = static_cast<Point>(i);
    return Permutation::from_images(std::move(inv));
  }
  return Permutation::from_images(std::move(c));
}

Permutation phi(const Permutation& upper_block_element) {
  const auto deg = upper_block_element.degree();
  if (deg == 0 || deg % 2 != 0) throw DegreeMismatch("phi: degree must be even");
  const auto n = deg / 2;
  std::vector<Point> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (upper_block_element[i] != i) {
      throw ValidationError("phi: input moves point " + std::to_string(i + 1) +
                            " of the lower block");
    }
    images[i] = static_cast<Point>(upper_block_element[i + n] - n);
  }
  return Permutation::from_images(std::move(images));
}

IsoElement embed_phi(const Permutation& p, std::size_t n) {
  if (p.degree() > n) {
    throw DegreeMismatch("embed_phi: degree " + std::to_string(p.degree()) + " exceeds " +
                         std::to_string(n));
  }
  const Permutation id(2 * n);
  std::vector<Point> images(id.images().begin(), id.images().end());
  for (std::size_t i = 0; i < p.degree(); ++i) images[i] = p[i];
  return IsoElement(Permutation::from_images(std::move(images)));
}

IsoElement diagonal(const Permutation& v) {
  return IsoElement(shift_block(v, v.degree(), 0, v, v.degree()));
}

std::vector<IsoElement> delta(std::span<const Permutation> subgroup) {
  if (subgroup.empty()) throw ValidationError("delta: empty set");
  std::unordered_set<Permutation, PermutationHash> members(subgroup.begin(), subgroup.end());
  if (!members.contains(Permutation(subgroup.front().degree()))) {
    throw ValidationError("delta: set does not contain the identity");
  }
  for (const auto& a : subgroup) {
    for (const auto& b : subgroup) {
      if (!members.contains(compose(a, b))) {
        throw ValidationError("delta: set not closed, " + format_cycles(a) + " * " +
                              format_cycles(b) + " missing");
      }
    }
  }
  std::vector<IsoElement> out;
  out.reserve(members.size());
  std::vector<Permutation> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& v : sorted) out.push_back(diagonal(v));
  return out;
}

// ---------------------------------------------------------------------------

IsoGroup::IsoGroup(std::size_t n, std::vector<IsoElement> generators)
    : n_(n), generators_(std::move(generators)) {
  for (const auto& g : generators_) {
    if (g.n() != n_) {
      throw DegreeMismatch("IsoGroup: generator of Iso(" + std::to_string(g.n()) +
                           ") in a subgroup of Iso(" + std::to_string(n_) + ")");
    }
  }
}

const std::vector<IsoElement>& IsoGroup::elements() const {
  if (!elements_) throw std::logic_error("IsoGroup: elements not materialized");
  return *elements_;
}

std::optional<std::size_t> IsoGroup::order() const noexcept {
  if (!elements_) return std::nullopt;
  return elements_->size();
}

bool IsoGroup::contains(const IsoElement& g) const {
  return std::find(elements().begin(), elements().end(), g) != elements().end();
}

IsoGroup generate_group(std::vector<IsoElement> generators, std::size_t limit) {
  if (generators.empty()) throw ValidationError("generate_group: no generators");
  const auto n = generators.front().n();
  std::vector<Permutation> inner;
  inner.reserve(generators.size());
  for (const auto& g : generators) {
    if (g.n() != n) throw DegreeMismatch("generate_group: mixed degrees");
    inner.push_back(g.inner());
  }
  auto closure = generate_closure(std::move(inner), limit);
  IsoGroup group(n, std::move(generators));
  std::vector<IsoElement> elements;
  elements.reserve(closure.size());
  for (auto& p : closure) elements.emplace_back(std::move(p));
  group.elements_ = std::move(elements);
  return group;
}

std::vector<Permutation> orbit(const Permutation& b, std::span<const IsoElement> generators) {
  std::vector<Permutation> out{b};
  std::unordered_set<Permutation, PermutationHash> seen{b};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& g : generators) {
      auto next = act(out[head], g);
      if (seen.insert(next).second) out.push_back(std::move(next));
    }
  }
  return out;
}

std::vector<Permutation> orbit(const Permutation& b, const IsoGroup& group) {
  if (b.degree() != group.n()) throw DegreeMismatch("orbit: codeword degree differs from group");
  return orbit(b, group.generators());
}

std::vector<std::vector<Permutation>> orbit_split(std::span<const Permutation> set,
                                                  const IsoGroup& group) {
  std::unordered_set<Permutation, PermutationHash> remaining(set.begin(), set.end());
  std::vector<Permutation> sorted(remaining.begin(), remaining.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::vector<Permutation>> orbits;
  for (const auto& b : sorted) {
    if (!remaining.contains(b)) continue;
    auto orb = orbit(b, group);
    for (const auto& w : orb) {
      if (remaining.erase(w) == 0) {
        throw ValidationError("orbit_split: set is not invariant, " + format_cycles(w) +
                              " lies in the orbit of " + format_cycles(b) + " but not in the set");
      }
    }
    std::sort(orb.begin(), orb.end());
    orbits.push_back(std::move(orb));
  }
  std::stable_sort(orbits.begin(), orbits.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return orbits;
}

bool is_stabilized(const Permutation& b, std::span<const IsoElement> subgroup) {
  return std::all_of(subgroup.begin(), subgroup.end(),
                     [&](const IsoElement& s) { return act(b, s) == b; });
}

std::vector<IsoElement> stabilizer(const Permutation& b, const IsoGroup& group) {
  std::vector<IsoElement> out;
  for (const auto& g : group.elements())
    if (act(b, g) == b) out.push_back(g);
  return out;
}

std::vector<Permutation> diagonal_part(const IsoGroup& group) {
  std::vector<Permutation> out;
  for (const auto& g : group.elements()) {
    if (g.block_swap()) continue;
    auto parts = g.decompose();
    if (parts.lower == parts.upper) out.push_back(std::move(parts.lower));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool fixed_point_free(std::span<const Point> images, std::size_t offset) {
  for (std::size_t i = 0; i < images.size(); ++i)
    if (images[i] == i + offset) return false;
  return true;
}

class DiagonalSearch {
public:
  DiagonalSearch(const IsoGroup& group, const FiniteGroup& target, std::size_t limit)
      : target_order_(target.order()), limit_(limit) {
    for (auto k : target.order_profile()) ++wanted_[k];
    const auto n = group.n();
    for (const auto& g : group.elements()) {
      if (g.block_swap() || g.inner().is_identity()) continue;
      const auto im = g.inner().images();
      if (!fixed_point_free(im.subspan(0, n), 0) || !fixed_point_free(im.subspan(n), n)) continue;
      allowed_.insert(g);
      if (wanted_.contains(g.inner().order())) candidates_.push_back(g);
    }
    std::sort(candidates_.begin(), candidates_.end(), [](const auto& a, const auto& b) {
      const auto oa = a.inner().order(), ob = b.inner().order();
      return oa != ob ? oa > ob : a < b;
    });
    identity_ = IsoElement::identity(n);
  }

  RegularDiagonalResult run() {
    RegularDiagonalResult out;
    std::vector<IsoElement> start{identity_};
    if (extend(start, 0)) out.elements = found_;
    std::sort(out.elements.begin(), out.elements.end());
    out.nodes = nodes_;
    out.complete = !stopped_;
    return out;
  }

private:
  bool profile_fits(const std::vector<IsoElement>& w) const {
    std::map<std::size_t, std::size_t> counts;
    for (const auto& g : w) ++counts[g.inner().order()];
    for (const auto& [k, c] : counts) {
      const auto it = wanted_.find(k);
      if (it == wanted_.end() || c > it->second) return false;
    }
    return true;
  }

  bool extend(const std::vector<IsoElement>& w, std::size_t from) {
    if (w.size() == target_order_) {
      found_ = w;
      return true;
    }
    for (std::size_t i = from; i < candidates_.size(); ++i) {
      if (++nodes_ > limit_) {
        stopped_ = true;
        return false;
      }
      const auto& x = candidates_[i];
      if (std::find(w.begin(), w.end(), x) != w.end()) continue;
      bool commutes = true;
      for (const auto& g : w) {
        if (g * x != x * g) {
          commutes = false;
          break;
        }
      }
      if (!commutes) continue;
      // <W, x> = W * <x> since W is abelian and x commutes with it.
      std::vector<IsoElement> next = w;
      std::unordered_set<IsoElement, IsoElementHash> seen(w.begin(), w.end());
      auto power = x;
      bool ok = true;
      while (!seen.contains(power) && ok) {
        for (const auto& g : w) {
          auto h = g * power;
          if (!h.inner().is_identity() && !allowed_.contains(h)) {
            ok = false;
            break;
          }
          if (seen.insert(h).second) next.push_back(std::move(h));
        }
        power = power * x;
      }
      if (!ok || target_order_ % next.size() != 0 || !profile_fits(next)) continue;
      if (extend(next, i + 1)) return true;
      if (stopped_) return false;
    }
    return false;
  }

  std::size_t target_order_;
  std::size_t limit_;
  std::map<std::size_t, std::size_t> wanted_;
  std::unordered_set<IsoElement, IsoElementHash> allowed_;
  std::vector<IsoElement> candidates_;
  std::vector<IsoElement> found_;
  IsoElement identity_ = IsoElement::identity(1);
  std::size_t nodes_ = 0;
  bool stopped_ = false;
};

}  // namespace

RegularDiagonalResult find_regular_diagonal_subgroup(const IsoGroup& group, const FiniteGroup& target,
                                                     std::size_t node_limit) {
  if (!target.is_abelian()) throw ValidationError("find_regular_diagonal_subgroup: target must be abelian");
  if (target.order() != group.n()) {
    throw DegreeMismatch("find_regular_diagonal_subgroup: |G| = " + std::to_string(target.order()) +
                         " differs from n = " + std::to_string(group.n()));
  }
  DiagonalSearch search(group, target, node_limit);
  return search.run();
}

}  // namespace molskit
