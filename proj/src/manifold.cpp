#include "psm/manifold.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace psm {

Manifold::Manifold(std::string name, int ambient_dim, int codim, ConstraintFn h, JacobianFn jacobian)
    : Manifold(Unchecked{}, std::move(name), ambient_dim, codim, std::move(h), std::move(jacobian)) {
  if (codim < 1 || codim > ambient_dim)
    throw std::invalid_argument("manifold '" + impl_->name + "': codim must satisfy 1 <= l <= k");
}

Manifold::Manifold(Unchecked, std::string name, int ambient_dim, int codim, ConstraintFn h,
                   JacobianFn jacobian) {
  if (ambient_dim < 1) throw std::invalid_argument("manifold ambient dimension must be positive");
  if (!h) throw std::invalid_argument("manifold requires a constraint function");
  impl_ = std::make_shared<const Impl>(
      Impl{std::move(name), ambient_dim, codim, std::move(h), std::move(jacobian)});
}

void Manifold::check_dim(const Vector& q) const {
  if (q.size() != impl_->ambient_dim)
    throw std::invalid_argument("manifold '" + impl_->name + "': expected configuration of length " +
                                std::to_string(impl_->ambient_dim) + ", got " + std::to_string(q.size()));
}

Vector Manifold::evaluate(const Vector& q) const {
  check_dim(q);
  Vector v = impl_->h(q);
  if (v.size() != impl_->codim)
    throw std::logic_error("manifold '" + impl_->name + "': constraint returned wrong length");
  return v;
}

Matrix Manifold::jacobian(const Vector& q) const {
  check_dim(q);
  if (!impl_->jacobian) return fd_jacobian(*this, q);
  Matrix J = impl_->jacobian(q);
  if (J.rows() != impl_->codim || J.cols() != impl_->ambient_dim)
    throw std::logic_error("manifold '" + impl_->name + "': jacobian has wrong shape");
  return J;
}

Manifold Manifold::intersect(const Manifold& a, const Manifold& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("cannot intersect manifolds of different ambient dimension");
  const int la = a.codim();
  const int lb = b.codim();
  auto h = [a, b, la, lb](const Vector& q) {
    Vector out(la + lb);
    out << a.evaluate(q), b.evaluate(q);
    return out;
  };
  auto jac = [a, b, la, lb](const Vector& q) {
    Matrix J(la + lb, q.size());
    J << a.jacobian(q), b.jacobian(q);
    return J;
  };
  return Manifold(Unchecked{}, a.name() + " & " + b.name(), a.ambient_dim(), la + lb, std::move(h),
                  std::move(jac));
}

Matrix fd_jacobian(const Manifold& m, const Vector& q, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_jacobian: step must be positive");
  const int k = m.ambient_dim();
  Matrix J(m.codim(), k);
  Vector qp = q;
  for (int j = 0; j < k; ++j) {
    const double orig = qp(j);
    qp(j) = orig + step;
    const Vector hp = m.evaluate(qp);
    qp(j) = orig - step;
    const Vector hm = m.evaluate(qp);
    qp(j) = orig;
    J.col(j) = (hp - hm) / (2.0 * step);
  }
  return J;
}

Matrix tangent_nullspace(const Manifold& m, const Vector& q, double sv_tol) {
  if (!(sv_tol > 0.0)) throw std::invalid_argument("tangent_nullspace: sv_tol must be positive");
  return linalg::nullspace_basis(m.jacobian(q), sv_tol);
}

ProjectionResult project_detailed(const Configuration& q0, const Manifold& m, const ProjectionOptions& opts) {
  if (!(opts.eps > 0.0)) throw std::invalid_argument("project: eps must be positive");
  if (opts.max_iters < 1) throw std::invalid_argument("project: max_iters must be >= 1");

  ProjectionResult result;
  Configuration q = q0;
  Vector h = m.evaluate(q);
  double residual = h.norm();
  int increases = 0;

  for (int it = 0;; ++it) {
    result.iterations = it;
    result.residual = residual;
    if (!std::isfinite(residual) || !q.allFinite()) return result;
    if (residual <= opts.eps) {
      result.q = std::move(q);
      return result;
    }
    if (it == opts.max_iters) return result;

    Eigen::Index rank = 0;
    const Vector step = linalg::lstsq(m.jacobian(q), h, opts.sv_tol, &rank);
    if (rank == 0) return result;
    q -= step;

    h = m.evaluate(q);
    const double next = h.norm();
    increases = next > residual ? increases + 1 : 0;
    residual = next;
    if (increases >= opts.divergence_window) {
      result.iterations = it + 1;
      result.residual = residual;
      return result;
    }
  }
}

namespace manifolds {

Manifold paraboloid(double coef, double offset, std::string name) {
  auto h = [coef, offset](const Vector& q) {
    Vector out(1);
    out(0) = coef * (q(0) * q(0) + q(1) * q(1)) + offset - q(2);
    return out;
  };
  auto jac = [coef](const Vector& q) {
    Matrix J(1, 3);
    J << 2.0 * coef * q(0), 2.0 * coef * q(1), -1.0;
    return J;
  };
  return Manifold(std::move(name), 3, 1, h, jac);
}

Manifold cylinder(double coef, double offset, std::string name) {
  auto h = [coef, offset](const Vector& q) {
    Vector out(1);
    out(0) = coef * (q(0) * q(0) + q(1) * q(1)) + offset;
    return out;
  };
  auto jac = [coef](const Vector& q) {
    Matrix J(1, 3);
    J << 2.0 * coef * q(0), 2.0 * coef * q(1), 0.0;
    return J;
  };
  return Manifold(std::move(name), 3, 1, h, jac);
}

Manifold sphere(const Vector& center, double radius, std::string name) {
  auto h = [center, radius](const Vector& q) {
    Vector out(1);
    out(0) = (q - center).norm() - radius;
    return out;
  };
  auto jac = [center](const Vector& q) {
    const Vector d = q - center;
    const double n = d.norm();
    Matrix J = Matrix::Zero(1, q.size());
    if (n > 0.0) J.row(0) = d.transpose() / n;
    return J;
  };
  return Manifold(std::move(name), static_cast<int>(center.size()), 1, h, jac);
}

Manifold linear(const Matrix& A, const Vector& b, std::string name) {
  if (A.rows() != b.size()) throw std::invalid_argument("linear manifold: A rows must match b");
  auto h = [A, b](const Vector& q) -> Vector { return A * q - b; };
  auto jac = [A](const Vector&) -> Matrix { return A; };
  return Manifold(std::move(name), static_cast<int>(A.cols()), static_cast<int>(A.rows()), h, jac);
}

Manifold point(const Vector& target, std::string name) {
  const int k = static_cast<int>(target.size());
  auto h = [target](const Vector& q) -> Vector { return q - target; };
  auto jac = [k](const Vector&) -> Matrix { return Matrix::Identity(k, k); };
  return Manifold(std::move(name), k, k, h, jac);
}

Manifold free_space(int ambient_dim, std::string name) {
  auto h = [](const Vector&) -> Vector { return Vector::Zero(1); };
  auto jac = [ambient_dim](const Vector&) -> Matrix { return Matrix::Zero(1, ambient_dim); };
  return Manifold(std::move(name), ambient_dim, 1, h, jac);
}

}  // namespace manifolds

}  // namespace psm
