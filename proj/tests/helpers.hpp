#pragma once

#include <initializer_list>

#include "psm/random.hpp"
#include "psm/types.hpp"

namespace psm::test {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Vector random_vec(Rng& rng, Eigen::Index n, double lo, double hi) {
  return uniform_in_box(rng, Vector::Constant(n, lo), Vector::Constant(n, hi));
}

}  // namespace psm::test
