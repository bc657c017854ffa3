#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "psm/linalg.hpp"
#include "psm/types.hpp"

namespace psm {

// Implicit constraint manifold {q in R^k | h(q) = 0} with h: R^k -> R^l.
//
// Immutable value type; copies share the underlying constraint functions.
// When no analytic Jacobian is supplied, jacobian() falls back to central
// finite differences.
class Manifold {
 public:
  using ConstraintFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  // Requires 1 <= codim <= ambient_dim.
  Manifold(std::string name, int ambient_dim, int codim, ConstraintFn h, JacobianFn jacobian = {});

  const std::string& name() const { return impl_->name; }
  int ambient_dim() const { return impl_->ambient_dim; }
  int codim() const { return impl_->codim; }
  bool has_analytic_jacobian() const { return static_cast<bool>(impl_->jacobian); }

  // h(q); throws std::invalid_argument on dimension mismatch.
  Vector evaluate(const Vector& q) const;
  // l x k constraint Jacobian.
  Matrix jacobian(const Vector& q) const;

  // Stacked constraint [h_a; h_b]. The result may be overdetermined
  // (codim > ambient_dim), e.g. a point goal intersected with a surface.
  static Manifold intersect(const Manifold& a, const Manifold& b);

 private:
  struct Impl {
    std::string name;
    int ambient_dim;
    int codim;
    ConstraintFn h;
    JacobianFn jacobian;
  };
  struct Unchecked {};
  Manifold(Unchecked, std::string name, int ambient_dim, int codim, ConstraintFn h, JacobianFn jacobian);
  void check_dim(const Vector& q) const;

  std::shared_ptr<const Impl> impl_;
};

inline Vector evaluate(const Manifold& m, const Vector& q) { return m.evaluate(q); }
inline double residual_norm(const Manifold& m, const Vector& q) { return m.evaluate(q).norm(); }

// Central-difference Jacobian, entry (i,j) = (h_i(q + s e_j) - h_i(q - s e_j)) / 2s.
Matrix fd_jacobian(const Manifold& m, const Vector& q, double step = 1e-6);

// Orthonormal basis (k x (k - rank)) of the tangent space at q, i.e. the
// right nullspace of J(q). A zero Jacobian returns the identity.
Matrix tangent_nullspace(const Manifold& m, const Vector& q, double sv_tol = linalg::kDefaultSvTol);

struct ProjectionOptions {
  double eps = 1e-2;
  int max_iters = 200;
  double sv_tol = linalg::kDefaultSvTol;
  // Consecutive residual increases tolerated before declaring divergence.
  int divergence_window = 10;
};

struct ProjectionResult {
  std::optional<Configuration> q;
  int iterations = 0;
  double residual = 0.0;
};

// Newton iteration q <- q - J(q)^+ h(q) until ||h(q)|| <= eps.
// Failure (no convergence, divergence, rank-zero Jacobian, non-finite values)
// is reported through an empty optional.
ProjectionResult project_detailed(const Configuration& q, const Manifold& m, const ProjectionOptions& opts);

inline std::optional<Configuration> project(const Configuration& q, const Manifold& m, double eps,
                                            int max_iters = 200) {
  ProjectionOptions opts;
  opts.eps = eps;
  opts.max_iters = max_iters;
  return project_detailed(q, m, opts).q;
}

// Built-in constraints.
namespace manifolds {

// h(q) = coef * (q1^2 + q2^2) + offset - q3 (k = 3).
Manifold paraboloid(double coef, double offset, std::string name = "paraboloid");
// h(q) = coef * (q1^2 + q2^2) + offset (k = 3).
Manifold cylinder(double coef, double offset, std::string name = "cylinder");
// h(q) = ||q - center|| - radius.
Manifold sphere(const Vector& center, double radius, std::string name = "sphere");
// h(q) = A q - b.
Manifold linear(const Matrix& A, const Vector& b, std::string name = "linear");
// h(q) = q - target.
Manifold point(const Vector& target, std::string name = "point");
// h(q) = 0 (codim 1, zero Jacobian): unconstrained motion in R^k.
Manifold free_space(int ambient_dim, std::string name = "free");

}  // namespace manifolds

}  // namespace psm
