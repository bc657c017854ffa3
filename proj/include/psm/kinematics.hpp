#pragma once

#include <memory>
#include <string>
#include <vector>

#include "psm/manifold.hpp"
#include "psm/types.hpp"

namespace psm {

enum class JointType { Revolute, Prismatic };

struct Joint {
  Vector3 axis = Vector3::UnitZ();  // unit, expressed in the joint frame
  JointType type = JointType::Revolute;
  Isometry3 origin = Isometry3::Identity();  // parent frame -> joint frame at q = 0
  double lower = -3.141592653589793;
  double upper = 3.141592653589793;
};

// Serial chain: world <- base <- origin_1 * motion_1(q_1) <- ... <- tool.
class SerialChain {
 public:
  // Collision geometry starts at key point `geometry_start` of the list
  // [base, frame_1, ..., frame_n, tool]; planar base joints use it to skip
  // their virtual intermediate frames.
  SerialChain(std::string name, Isometry3 base, std::vector<Joint> joints,
              Isometry3 tool = Isometry3::Identity(), int geometry_start = 0);

  const std::string& name() const { return name_; }
  int dof() const { return static_cast<int>(joints_.size()); }
  const std::vector<Joint>& joints() const { return joints_; }
  const Isometry3& base() const { return base_; }
  const Isometry3& tool() const { return tool_; }
  int geometry_start() const { return geometry_start_; }

  // World frames after each joint, followed by the tool frame (dof + 1 entries).
  std::vector<Isometry3> frames(const Eigen::Ref<const Vector>& q) const;
  Isometry3 tool_pose(const Eigen::Ref<const Vector>& q) const;

  // Collision sample points: base origin, each joint frame origin, the tool
  // point, and the midpoints between consecutive ones (from geometry_start).
  std::vector<Vector3> link_samples(const Eigen::Ref<const Vector>& q) const;

 private:
  std::string name_;
  Isometry3 base_;
  std::vector<Joint> joints_;
  Isometry3 tool_;
  int geometry_start_ = 0;
};

// Several chains sharing one stacked configuration vector.
class MultiRobotSystem {
 public:
  explicit MultiRobotSystem(std::vector<SerialChain> chains);

  int dof() const { return dof_; }
  int num_chains() const { return static_cast<int>(chains_.size()); }
  const SerialChain& chain(int index) const;
  const std::vector<SerialChain>& chains() const { return chains_; }
  int offset(int index) const;

  Eigen::VectorBlock<const Vector> slice(const Vector& q, int index) const;

  // Per-joint limits of the stacked configuration.
  Vector lower_limits() const;
  Vector upper_limits() const;

 private:
  std::vector<SerialChain> chains_;
  std::vector<int> offsets_;
  int dof_ = 0;
};

using RobotPtr = std::shared_ptr<const MultiRobotSystem>;

// World position of `point` (expressed in the tool frame of `chain`).
Vector3 fk_position(const MultiRobotSystem& sys, int chain, const Vector3& point, const Vector& q);
Isometry3 fk_pose(const MultiRobotSystem& sys, int chain, const Vector& q);

// All link sample points of all chains.
std::vector<Vector3> link_sample_points(const MultiRobotSystem& sys, const Vector& q);

// h(q) = x_g - f_pos(q): the end-effector point reaches x_g.
Manifold pick_constraint(RobotPtr sys, int chain, const Vector3& point, const Vector3& x_g,
                         std::string name = "pick");
// h(q) = f_pos,1(q) - f_pos,2(q): two end-effector points coincide.
Manifold handover_constraint(RobotPtr sys, int chain1, const Vector3& point1, int chain2,
                             const Vector3& point2, std::string name = "handover");
// h(q) = (R_tool(q) axis)^T e_z - 1: the tool axis is aligned with e_z.
Manifold orientation_constraint(RobotPtr sys, int chain, const Vector3& axis = Vector3::UnitZ(),
                                const Vector3& e_z = Vector3::UnitZ(), std::string name = "orientation");

}  // namespace psm
