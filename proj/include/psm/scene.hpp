#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "psm/kinematics.hpp"
#include "psm/manifold.hpp"
#include "psm/types.hpp"

namespace psm {

// Axis-aligned box in workspace coordinates (closed set).
struct Aabb {
  Vector min_corner;
  Vector max_corner;

  Aabb() = default;
  Aabb(Vector lo, Vector hi);
  static Aabb from_center(const Vector& center, const Vector& half_extents);

  int dim() const { return static_cast<int>(min_corner.size()); }
  Vector center() const { return 0.5 * (min_corner + max_corner); }
  Vector half_extents() const { return 0.5 * (max_corner - min_corner); }

  bool contains(const Eigen::Ref<const Vector>& p) const;
  bool overlaps(const Aabb& other) const;
  // True if any point of the closed segment [a, b] lies inside the box.
  bool intersects_segment(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) const;
};

struct Obstacle {
  std::string id;
  Aabb box;
};

// An object rigidly carried by a body point. The object keeps its world
// axes; `offset` is its box center relative to the carrying point.
struct AttachmentRecord {
  std::string object_id;
  int chain = 0;
  Vector3 point = Vector3::Zero();  // carrying point in the chain's tool frame
  Vector3 offset = Vector3::Zero();
  Vector3 half_extents = Vector3::Zero();

  Aabb box_at(const MultiRobotSystem& sys, const Vector& q) const;
};

// C_free,i: static obstacles plus objects carried by the robot. For point
// tasks `robot` is null and the configuration itself is the workspace point.
struct FreeSpaceState {
  RobotPtr robot;
  std::vector<Obstacle> obstacles;
  std::vector<AttachmentRecord> attachments;

  const Obstacle* find_obstacle(const std::string& id) const;
  const AttachmentRecord* find_attachment(const std::string& id) const;
  std::size_t object_count() const { return obstacles.size() + attachments.size(); }
};

struct NoEffect {
  bool operator==(const NoEffect&) const = default;
};
// Attach an object (static or carried by another body) to a body point.
struct AttachEffect {
  std::string object_id;
  int chain = 0;
  Vector3 point = Vector3::Zero();
};
// Release a carried object as a static obstacle at its current pose.
struct DetachEffect {
  std::string object_id;
};
using TransitionEffect = std::variant<NoEffect, AttachEffect, DetachEffect>;

// Upsilon step applied when the path leaves manifold `trigger` (0-based) for
// manifold trigger + 1.
struct TransitionRule {
  int trigger = 0;
  TransitionEffect effect = NoEffect{};
};

bool config_collision_free(const Configuration& q, const FreeSpaceState& fs);

// Straight ambient segment check. Point tasks use an exact segment/box test;
// kinematic tasks sample configurations at spacing <= step.
bool collision_free_segment(const Configuration& qa, const Configuration& qb, const FreeSpaceState& fs,
                            double step = 0.05);

FreeSpaceState apply_transition(const FreeSpaceState& fs, const TransitionRule& rule, const Configuration& q_end);

// Applies every rule whose trigger equals `completed` in declaration order.
FreeSpaceState apply_transitions(const FreeSpaceState& fs, const std::vector<TransitionRule>& rules, int completed,
                                 const Configuration& q_end);

// Serializable description of a constraint; built into a Manifold against a
// scene's ambient dimension and robot.
struct ParaboloidDesc { double coef = 0; double offset = 0; };
struct CylinderDesc { double coef = 0; double offset = 0; };
struct SphereDesc { Vector center; double radius = 1; };
struct LinearDesc { Matrix A; Vector b; };
struct PointDesc { Vector target; };
struct FreeDesc {};
struct PickDesc { int chain = 0; Vector3 point = Vector3::Zero(); Vector3 target = Vector3::Zero(); };
struct HandoverDesc {
  int chain1 = 0;
  Vector3 point1 = Vector3::Zero();
  int chain2 = 1;
  Vector3 point2 = Vector3::Zero();
};
struct OrientationDesc { int chain = 0; Vector3 axis = Vector3::UnitZ(); Vector3 target = Vector3::UnitZ(); };

struct ManifoldDesc {
  std::string name;
  std::variant<ParaboloidDesc, CylinderDesc, SphereDesc, LinearDesc, PointDesc, FreeDesc, PickDesc, HandoverDesc,
               OrientationDesc>
      shape;
};

Manifold build_manifold(const ManifoldDesc& desc, int ambient_dim, const RobotPtr& robot);

enum class TaskKind { Point, Robot };

// A planning task: manifold sequence M_1..M_{n+1}, start, bounds of C,
// initial free space and transition rules.
struct Scene {
  std::string name;
  TaskKind kind = TaskKind::Point;
  int ambient_dim = 0;
  Vector lower;
  Vector upper;
  std::vector<ManifoldDesc> manifold_descs;
  std::vector<Manifold> manifolds;
  Configuration start;
  FreeSpaceState free_space;
  std::vector<TransitionRule> transitions;

  int num_segments() const { return static_cast<int>(manifolds.size()) - 1; }
  bool in_bounds(const Configuration& q) const;
  // Rebuilds `manifolds` from `manifold_descs` and validates the task.
  void finalize();
};

std::vector<std::string> benchmark_scene_names();
// Throws std::invalid_argument listing the available scenes for unknown names.
Scene build_benchmark_scene(const std::string& name);

}  // namespace psm
