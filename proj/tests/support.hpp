#pragma once

#include "molskit/isometry.hpp"
#include "molskit/permutation.hpp"
#include "oracle.hpp"

inline molskit::Permutation to_perm(const oracle::Perm& p) {
  return molskit::Permutation::from_images(std::vector<molskit::Point>(p.begin(), p.end()));
}

inline oracle::Perm to_vec(const molskit::Permutation& p) {
  return oracle::Perm(p.images().begin(), p.images().end());
}

inline molskit::Permutation cyc(const char* text, std::size_t n) { return molskit::parse_cycles(text, n); }

inline molskit::IsoElement random_iso(int n, std::mt19937& rng) {
  std::bernoulli_distribution coin(0.5);
  return molskit::IsoElement::from_parts(to_perm(oracle::random_perm(n, rng)),
                                         to_perm(oracle::random_perm(n, rng)), coin(rng));
}
