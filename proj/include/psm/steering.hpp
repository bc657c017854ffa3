#pragma once

#include <optional>

#include "psm/manifold.hpp"
#include "psm/random.hpp"

namespace psm {

struct SteerParams {
  double alpha = 1.0;  // step length
  double beta = 0.1;   // probability of constraint steering
  double r = 1.5;      // projection distance scale

  void validate() const;
};

// Directions with norm below this are discarded.
inline constexpr double kZeroDirection = 1e-12;

// Orthogonal projection of (q_rand - q_near) onto the tangent space of m at
// q_near: d = V V^T (q_rand - q_near).
Vector steer_point(const Configuration& q_near, const Configuration& q_rand, const Manifold& m,
                   double sv_tol = linalg::kDefaultSvTol);

// Linearized step toward the next manifold while staying tangent to the
// current one:
//   min_d 1/2 ||h_next + J_next d||^2  s.t.  J_cur d = 0,
// solved through its KKT system [[J_next^T J_next, J_cur^T], [J_cur, 0]] in the
// least-squares sense.
Vector steer_constraint(const Configuration& q_near, const Manifold& current, const Manifold& next,
                        double kkt_tol = linalg::kDefaultSvTol);

// The current manifold, its successor and their stacked intersection.
struct ManifoldPair {
  Manifold current;
  Manifold next;
  Manifold intersection;

  ManifoldPair(Manifold cur, Manifold nxt)
      : current(std::move(cur)), next(std::move(nxt)), intersection(Manifold::intersect(current, next)) {}
};

struct SteerOutcome {
  std::optional<Configuration> q;  // projected configuration, empty on failure
  bool used_constraint = false;     // SteerConstraint branch selected
  bool intersection_projection = false;  // projected onto current & next
  Configuration q_step;             // q_near + alpha d/|d| before projection (empty for zero d)
};

// One PSM* steering step. Exactly two uniform draws are consumed per call:
// the branch selector and the projection threshold.
SteerOutcome psm_steer(const SteerParams& params, const Configuration& q_near, const Configuration& q_rand,
                       const ManifoldPair& manifolds, const ProjectionOptions& projection, Rng& rng);

}  // namespace psm
