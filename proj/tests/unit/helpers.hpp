#pragma once

#include <random>
#include <vector>

#include "skiprec/graph.hpp"
#include "skiprec/ingest.hpp"
#include "skiprec/matrix.hpp"

namespace testutil {

inline skiprec::Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng,
                                     double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  skiprec::Matrix m(r, c);
  for (auto& x : m.flat()) x = d(rng);
  return m;
}

// Random labeled pairs: each (u, v) present with probability `density`.
inline std::vector<skiprec::LabeledPair> random_pairs(std::size_t n_users, std::size_t n_videos,
                                                      double density, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> cls(0, 2);
  std::vector<skiprec::LabeledPair> out;
  for (std::uint32_t u = 0; u < n_users; ++u) {
    for (std::uint32_t v = 0; v < n_videos; ++v) {
      if (keep(rng)) out.push_back({u, v, static_cast<skiprec::InteractionClass>(cls(rng))});
    }
  }
  return out;
}

}  // namespace testutil
