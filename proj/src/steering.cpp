#include "psm/steering.hpp"

#include <stdexcept>

namespace psm {

void SteerParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("steer: alpha must be positive");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("steer: beta must lie in [0, 1]");
  if (!(r > 0.0)) throw std::invalid_argument("steer: r must be positive");
}

Vector steer_point(const Configuration& q_near, const Configuration& q_rand, const Manifold& m, double sv_tol) {
  const Matrix V = tangent_nullspace(m, q_near, sv_tol);
  return V * (V.transpose() * (q_rand - q_near));
}

Vector steer_constraint(const Configuration& q_near, const Manifold& current, const Manifold& next, double kkt_tol) {
  const Matrix J_cur = current.jacobian(q_near);
  const Matrix J_next = next.jacobian(q_near);
  const Vector h_next = next.evaluate(q_near);
  const Eigen::Index k = q_near.size();
  const Eigen::Index l = J_cur.rows();

  Matrix K = Matrix::Zero(k + l, k + l);
  K.topLeftCorner(k, k) = J_next.transpose() * J_next;
  K.topRightCorner(k, l) = J_cur.transpose();
  K.bottomLeftCorner(l, k) = J_cur;
  Vector rhs = Vector::Zero(k + l);
  rhs.head(k) = -J_next.transpose() * h_next;

  return linalg::lstsq(K, rhs, kkt_tol).head(k);
}

SteerOutcome psm_steer(const SteerParams& params, const Configuration& q_near, const Configuration& q_rand,
                       const ManifoldPair& manifolds, const ProjectionOptions& projection, Rng& rng) {
  const double branch = uniform01(rng);
  const double threshold = uniform(rng, 0.0, params.r);

  SteerOutcome out;
  out.used_constraint = branch < params.beta;
  const Vector d = out.used_constraint ? steer_constraint(q_near, manifolds.current, manifolds.next)
                                       : steer_point(q_near, q_rand, manifolds.current);
  const double norm = d.norm();
  if (!(norm >= kZeroDirection)) return out;

  out.q_step = q_near + (params.alpha / norm) * d;
  out.intersection_projection = manifolds.next.evaluate(out.q_step).norm() < threshold;
  const Manifold& target = out.intersection_projection ? manifolds.intersection : manifolds.current;
  out.q = project_detailed(out.q_step, target, projection).q;
  return out;
}

}  // namespace psm
