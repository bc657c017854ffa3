#pragma once

#include <Eigen/Dense>

namespace psm::linalg {

// Relative singular value cutoff used for rank decisions throughout the library.
inline constexpr double kDefaultSvTol = 1e-9;

// Numerical rank of a computed SVD: singular values above sv_tol * sigma_max.
template <typename Svd>
Eigen::Index svd_rank(const Svd& svd, double sv_tol) {
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cutoff = sv_tol * s(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return rank;
}

// Minimum-norm least-squares solution of A x = b with singular values below
// sv_tol * sigma_max treated as zero. Returns the solution and writes the
// numerical rank to *rank when requested.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> lstsq(
    const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& b,
    double sv_tol = kDefaultSvTol, Eigen::Index* rank = nullptr) {
  using Scalar = typename DerivedA::Scalar;
  using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::JacobiSVD<MatrixX> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r = svd_rank(svd, sv_tol);
  if (rank) *rank = r;
  if (r == 0) return VectorX::Zero(A.cols());

  const auto U = svd.matrixU().leftCols(r);
  const auto V = svd.matrixV().leftCols(r);
  const VectorX s_inv = svd.singularValues().head(r).cwiseInverse();
  return V * (s_inv.asDiagonal() * (U.transpose() * b));
}

// Moore-Penrose pseudo-inverse via truncated SVD.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pseudo_inverse(
    const Eigen::MatrixBase<Derived>& A, double sv_tol = kDefaultSvTol) {
  using Scalar = typename Derived::Scalar;
  using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::JacobiSVD<MatrixX> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r = svd_rank(svd, sv_tol);
  if (r == 0) return MatrixX::Zero(A.cols(), A.rows());
  const auto U = svd.matrixU().leftCols(r);
  const auto V = svd.matrixV().leftCols(r);
  return V * svd.singularValues().head(r).cwiseInverse().asDiagonal() * U.transpose();
}

// Orthonormal basis of the right nullspace of A (k x (k - rank)). A zero
// matrix yields the identity.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> nullspace_basis(
    const Eigen::MatrixBase<Derived>& A, double sv_tol = kDefaultSvTol) {
  using Scalar = typename Derived::Scalar;
  using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::Index k = A.cols();
  if (A.rows() == 0) return MatrixX::Identity(k, k);
  Eigen::JacobiSVD<MatrixX> svd(A, Eigen::ComputeFullV);
  const Eigen::Index r = svd_rank(svd, sv_tol);
  return svd.matrixV().rightCols(k - r);
}

// Orthogonal projector V V^T onto the right nullspace of A.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> nullspace_projector(
    const Eigen::MatrixBase<Derived>& A, double sv_tol = kDefaultSvTol) {
  const auto V = nullspace_basis(A, sv_tol);
  return V * V.transpose();
}

}  // namespace psm::linalg
