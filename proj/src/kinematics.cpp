#include "psm/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace psm {

namespace {

Isometry3 joint_motion(const Joint& joint, double value) {
  Isometry3 T = Isometry3::Identity();
  if (joint.type == JointType::Revolute)
    T.linear() = Eigen::AngleAxisd(value, joint.axis).toRotationMatrix();
  else
    T.translation() = joint.axis * value;
  return T;
}

}  // namespace

SerialChain::SerialChain(std::string name, Isometry3 base, std::vector<Joint> joints, Isometry3 tool,
                         int geometry_start)
    : name_(std::move(name)), base_(base), joints_(std::move(joints)), tool_(tool), geometry_start_(geometry_start) {
  if (geometry_start_ < 0 || geometry_start_ > static_cast<int>(joints_.size()) + 1)
    throw std::invalid_argument("chain '" + name_ + "': geometry_start out of range");
  for (auto& j : joints_) {
    const double n = j.axis.norm();
    if (!(n > 0.0)) throw std::invalid_argument("chain '" + name_ + "': joint axis must be nonzero");
    if (std::abs(n - 1.0) > 1e-9) throw std::invalid_argument("chain '" + name_ + "': joint axis must be unit norm");
    if (j.lower > j.upper) throw std::invalid_argument("chain '" + name_ + "': joint limits require lo <= hi");
  }
}

std::vector<Isometry3> SerialChain::frames(const Eigen::Ref<const Vector>& q) const {
  if (q.size() != dof()) throw std::invalid_argument("chain '" + name_ + "': wrong configuration length");
  std::vector<Isometry3> out;
  out.reserve(joints_.size() + 1);
  Isometry3 T = base_;
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    T = T * joints_[i].origin * joint_motion(joints_[i], q(static_cast<Eigen::Index>(i)));
    out.push_back(T);
  }
  out.push_back(T * tool_);
  return out;
}

Isometry3 SerialChain::tool_pose(const Eigen::Ref<const Vector>& q) const { return frames(q).back(); }

std::vector<Vector3> SerialChain::link_samples(const Eigen::Ref<const Vector>& q) const {
  const auto fr = frames(q);
  std::vector<Vector3> keys;
  keys.reserve(fr.size() + 1);
  keys.push_back(base_.translation());
  for (const auto& T : fr) keys.push_back(T.translation());
  keys.erase(keys.begin(), keys.begin() + geometry_start_);

  std::vector<Vector3> out;
  out.reserve(2 * keys.size());
  out.push_back(keys.front());
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if ((keys[i] - keys[i - 1]).squaredNorm() > 1e-12) out.push_back(0.5 * (keys[i] + keys[i - 1]));
    out.push_back(keys[i]);
  }
  return out;
}

MultiRobotSystem::MultiRobotSystem(std::vector<SerialChain> chains) : chains_(std::move(chains)) {
  for (const auto& c : chains_) {
    offsets_.push_back(dof_);
    dof_ += c.dof();
  }
}

const SerialChain& MultiRobotSystem::chain(int index) const {
  if (index < 0 || index >= num_chains()) throw std::invalid_argument("invalid chain index " + std::to_string(index));
  return chains_[static_cast<std::size_t>(index)];
}

int MultiRobotSystem::offset(int index) const {
  chain(index);
  return offsets_[static_cast<std::size_t>(index)];
}

Eigen::VectorBlock<const Vector> MultiRobotSystem::slice(const Vector& q, int index) const {
  if (q.size() != dof_) throw std::invalid_argument("configuration length does not match system dof");
  return q.segment(offset(index), chain(index).dof());
}

Vector MultiRobotSystem::lower_limits() const {
  Vector lo(dof_);
  int i = 0;
  for (const auto& c : chains_)
    for (const auto& j : c.joints()) lo(i++) = j.lower;
  return lo;
}

Vector MultiRobotSystem::upper_limits() const {
  Vector hi(dof_);
  int i = 0;
  for (const auto& c : chains_)
    for (const auto& j : c.joints()) hi(i++) = j.upper;
  return hi;
}

Isometry3 fk_pose(const MultiRobotSystem& sys, int chain, const Vector& q) {
  return sys.chain(chain).tool_pose(sys.slice(q, chain));
}

Vector3 fk_position(const MultiRobotSystem& sys, int chain, const Vector3& point, const Vector& q) {
  return fk_pose(sys, chain, q) * point;
}

std::vector<Vector3> link_sample_points(const MultiRobotSystem& sys, const Vector& q) {
  std::vector<Vector3> out;
  for (int c = 0; c < sys.num_chains(); ++c) {
    auto pts = sys.chain(c).link_samples(sys.slice(q, c));
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

Manifold pick_constraint(RobotPtr sys, int chain, const Vector3& point, const Vector3& x_g, std::string name) {
  sys->chain(chain);
  const int k = sys->dof();
  auto h = [sys, chain, point, x_g](const Vector& q) -> Vector {
    return x_g - fk_position(*sys, chain, point, q);
  };
  return Manifold(std::move(name), k, 3, h);
}

Manifold handover_constraint(RobotPtr sys, int chain1, const Vector3& point1, int chain2, const Vector3& point2,
                             std::string name) {
  sys->chain(chain1);
  sys->chain(chain2);
  const int k = sys->dof();
  auto h = [sys, chain1, point1, chain2, point2](const Vector& q) -> Vector {
    return fk_position(*sys, chain1, point1, q) - fk_position(*sys, chain2, point2, q);
  };
  return Manifold(std::move(name), k, 3, h);
}

Manifold orientation_constraint(RobotPtr sys, int chain, const Vector3& axis, const Vector3& e_z, std::string name) {
  sys->chain(chain);
  const int k = sys->dof();
  const Vector3 a = axis.normalized();
  const Vector3 z = e_z.normalized();
  auto h = [sys, chain, a, z](const Vector& q) -> Vector {
    Vector out(1);
    out(0) = (fk_pose(*sys, chain, q).linear() * a).dot(z) - 1.0;
    return out;
  };
  return Manifold(std::move(name), k, 1, h);
}

}  // namespace psm
