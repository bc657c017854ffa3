#pragma once

#include <cstdint>
#include <random>

#include "psm/types.hpp"

namespace psm {

// Planner RNG. The uniform helpers below are bit-reproducible across
// standard libraries, unlike std::uniform_real_distribution.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline Vector uniform_in_box(Rng& rng, const Vector& lo, const Vector& hi) {
  Vector q(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) q(i) = uniform(rng, lo(i), hi(i));
  return q;
}

}  // namespace psm
