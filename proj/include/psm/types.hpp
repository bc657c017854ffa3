#pragma once

#include <Eigen/Dense>

namespace psm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Isometry3 = Eigen::Isometry3d;

// A point q in the ambient configuration space R^k.
using Configuration = Vector;

inline bool all_finite(const Eigen::Ref<const Vector>& v) { return v.allFinite(); }

}  // namespace psm
