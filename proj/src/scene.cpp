#include "psm/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Orders the endpoints so that f(a, b) and f(b, a) visit identical points.
bool lexicographically_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

Vector3 to3(const Vector& v) {
  if (v.size() != 3) throw std::invalid_argument("expected a 3-vector");
  return Vector3(v(0), v(1), v(2));
}

Isometry3 translation(double x, double y, double z) {
  Isometry3 T = Isometry3::Identity();
  T.translation() = Vector3(x, y, z);
  return T;
}

}  // namespace

Aabb::Aabb(Vector lo, Vector hi) : min_corner(std::move(lo)), max_corner(std::move(hi)) {
  if (min_corner.size() != max_corner.size()) throw std::invalid_argument("aabb corners differ in dimension");
  if ((min_corner.array() > max_corner.array()).any())
    throw std::invalid_argument("aabb requires min_corner <= max_corner");
}

Aabb Aabb::from_center(const Vector& center, const Vector& half_extents) {
  return Aabb(center - half_extents, center + half_extents);
}

bool Aabb::contains(const Eigen::Ref<const Vector>& p) const {
  return (p.array() >= min_corner.array()).all() && (p.array() <= max_corner.array()).all();
}

bool Aabb::overlaps(const Aabb& other) const {
  return (min_corner.array() <= other.max_corner.array()).all() &&
         (other.min_corner.array() <= max_corner.array()).all();
}

bool Aabb::intersects_segment(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) const {
  double t0 = 0.0;
  double t1 = 1.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = b(i) - a(i);
    if (d == 0.0) {
      if (a(i) < min_corner(i) || a(i) > max_corner(i)) return false;
      continue;
    }
    double ta = (min_corner(i) - a(i)) / d;
    double tb = (max_corner(i) - a(i)) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

Aabb AttachmentRecord::box_at(const MultiRobotSystem& sys, const Vector& q) const {
  const Vector3 center = fk_position(sys, chain, point, q) + offset;
  return Aabb::from_center(center, half_extents);
}

const Obstacle* FreeSpaceState::find_obstacle(const std::string& id) const {
  auto it = std::find_if(obstacles.begin(), obstacles.end(), [&](const Obstacle& o) { return o.id == id; });
  return it == obstacles.end() ? nullptr : &*it;
}

const AttachmentRecord* FreeSpaceState::find_attachment(const std::string& id) const {
  auto it = std::find_if(attachments.begin(), attachments.end(),
                         [&](const AttachmentRecord& a) { return a.object_id == id; });
  return it == attachments.end() ? nullptr : &*it;
}

bool config_collision_free(const Configuration& q, const FreeSpaceState& fs) {
  if (!fs.robot) {
    for (const auto& o : fs.obstacles)
      if (o.box.contains(q)) return false;
    return true;
  }
  const auto points = link_sample_points(*fs.robot, q);
  for (const auto& o : fs.obstacles)
    for (const auto& p : points)
      if (o.box.contains(p)) return false;
  for (const auto& a : fs.attachments) {
    const Aabb carried = a.box_at(*fs.robot, q);
    for (const auto& o : fs.obstacles)
      if (carried.overlaps(o.box)) return false;
  }
  return true;
}

bool collision_free_segment(const Configuration& qa, const Configuration& qb, const FreeSpaceState& fs,
                            double step) {
  if (qa.size() != qb.size()) throw std::invalid_argument("collision_free_segment: dimension mismatch");
  if (!(step > 0.0)) throw std::invalid_argument("collision_free_segment: step must be positive");
  const bool swap = lexicographically_less(qb, qa);
  const Vector& a = swap ? qb : qa;
  const Vector& b = swap ? qa : qb;

  if (!fs.robot) {
    for (const auto& o : fs.obstacles)
      if (o.box.intersects_segment(a, b)) return false;
    return true;
  }

  const double length = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(length / step)));
  const Vector delta = b - a;
  for (int i = 0; i <= n; ++i) {
    const Vector q = a + delta * (static_cast<double>(i) / n);
    if (!config_collision_free(q, fs)) return false;
  }
  return true;
}

FreeSpaceState apply_transition(const FreeSpaceState& fs, const TransitionRule& rule, const Configuration& q_end) {
  FreeSpaceState out = fs;
  std::visit(
      overloaded{
          [](const NoEffect&) {},
          [&](const AttachEffect& e) {
            if (!out.robot) throw std::invalid_argument("attach requires a robot");
            Vector3 center;
            Vector3 half;
            if (const Obstacle* o = out.find_obstacle(e.object_id)) {
              center = to3(o->box.center());
              half = to3(o->box.half_extents());
              std::erase_if(out.obstacles, [&](const Obstacle& x) { return x.id == e.object_id; });
            } else if (const AttachmentRecord* a = out.find_attachment(e.object_id)) {
              center = to3(a->box_at(*out.robot, q_end).center());
              half = a->half_extents;
              std::erase_if(out.attachments, [&](const AttachmentRecord& x) { return x.object_id == e.object_id; });
            } else {
              throw std::invalid_argument("attach: unknown object '" + e.object_id + "'");
            }
            AttachmentRecord rec;
            rec.object_id = e.object_id;
            rec.chain = e.chain;
            rec.point = e.point;
            rec.offset = center - fk_position(*out.robot, e.chain, e.point, q_end);
            rec.half_extents = half;
            out.attachments.push_back(rec);
          },
          [&](const DetachEffect& e) {
            const AttachmentRecord* a = out.find_attachment(e.object_id);
            if (!a) throw std::invalid_argument("detach: object '" + e.object_id + "' is not attached");
            Obstacle placed{e.object_id, a->box_at(*out.robot, q_end)};
            std::erase_if(out.attachments, [&](const AttachmentRecord& x) { return x.object_id == e.object_id; });
            out.obstacles.push_back(std::move(placed));
          },
      },
      rule.effect);
  return out;
}

FreeSpaceState apply_transitions(const FreeSpaceState& fs, const std::vector<TransitionRule>& rules, int completed,
                                 const Configuration& q_end) {
  FreeSpaceState out = fs;
  for (const auto& rule : rules)
    if (rule.trigger == completed) out = apply_transition(out, rule, q_end);
  return out;
}

Manifold build_manifold(const ManifoldDesc& desc, int k, const RobotPtr& robot) {
  auto need_robot = [&]() -> const RobotPtr& {
    if (!robot) throw std::invalid_argument("manifold '" + desc.name + "' requires a robot");
    return robot;
  };
  auto need_dim = [&](int dim) {
    if (k != dim) throw std::invalid_argument("manifold '" + desc.name + "' requires ambient dimension " +
                                              std::to_string(dim));
  };
  return std::visit(
      overloaded{
          [&](const ParaboloidDesc& d) {
            need_dim(3);
            return manifolds::paraboloid(d.coef, d.offset, desc.name);
          },
          [&](const CylinderDesc& d) {
            need_dim(3);
            return manifolds::cylinder(d.coef, d.offset, desc.name);
          },
          [&](const SphereDesc& d) {
            need_dim(static_cast<int>(d.center.size()));
            return manifolds::sphere(d.center, d.radius, desc.name);
          },
          [&](const LinearDesc& d) {
            need_dim(static_cast<int>(d.A.cols()));
            return manifolds::linear(d.A, d.b, desc.name);
          },
          [&](const PointDesc& d) {
            need_dim(static_cast<int>(d.target.size()));
            return manifolds::point(d.target, desc.name);
          },
          [&](const FreeDesc&) { return manifolds::free_space(k, desc.name); },
          [&](const PickDesc& d) { return pick_constraint(need_robot(), d.chain, d.point, d.target, desc.name); },
          [&](const HandoverDesc& d) {
            return handover_constraint(need_robot(), d.chain1, d.point1, d.chain2, d.point2, desc.name);
          },
          [&](const OrientationDesc& d) {
            return orientation_constraint(need_robot(), d.chain, d.axis, d.target, desc.name);
          },
      },
      desc.shape);
}

bool Scene::in_bounds(const Configuration& q) const {
  return (q.array() >= lower.array()).all() && (q.array() <= upper.array()).all();
}

void Scene::finalize() {
  if (ambient_dim < 1) throw std::invalid_argument("scene '" + name + "': ambient_dim must be positive");
  if (lower.size() != ambient_dim || upper.size() != ambient_dim)
    throw std::invalid_argument("scene '" + name + "': bounds must have length ambient_dim");
  if ((lower.array() > upper.array()).any()) throw std::invalid_argument("scene '" + name + "': lower > upper");
  if (start.size() != ambient_dim) throw std::invalid_argument("scene '" + name + "': start has wrong length");
  if (!start.allFinite()) throw std::invalid_argument("scene '" + name + "': start must be finite");
  if (manifold_descs.size() < 2)
    throw std::invalid_argument("scene '" + name + "': needs at least two manifolds (one segment)");
  if (free_space.robot && free_space.robot->dof() != ambient_dim)
    throw std::invalid_argument("scene '" + name + "': robot dof does not match ambient_dim");
  manifolds.clear();
  for (const auto& d : manifold_descs) manifolds.push_back(build_manifold(d, ambient_dim, free_space.robot));
  for (const auto& t : transitions)
    if (t.trigger < 0 || t.trigger >= num_segments())
      throw std::invalid_argument("scene '" + name + "': transition trigger out of range");
  for (std::size_t i = 0; i < free_space.obstacles.size(); ++i)
    for (std::size_t j = i + 1; j < free_space.obstacles.size(); ++j)
      if (free_space.obstacles[i].id == free_space.obstacles[j].id)
        throw std::invalid_argument("scene '" + name + "': duplicate object id '" + free_space.obstacles[i].id + "'");
}

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Scene point3d_base(std::string name) {
  Scene s;
  s.name = std::move(name);
  s.kind = TaskKind::Point;
  s.ambient_dim = 3;
  s.lower = Vector::Constant(3, -6.0);
  s.upper = Vector::Constant(3, 6.0);
  s.start = vec({3.5, 3.5, 4.45});
  s.manifold_descs = {
      {"paraboloid_upper", ParaboloidDesc{0.1, 2.0}},
      {"cylinder", CylinderDesc{0.25, -1.0}},
      {"paraboloid_lower", ParaboloidDesc{-0.1, -2.0}},
      {"goal", PointDesc{vec({-3.5, -3.5, -4.45})}},
  };
  return s;
}

// Boxes straddling the radius-2 intersection circles at z = +-2.4. Each
// circle keeps open arcs, so several intersection regions stay reachable.
std::vector<Obstacle> point3d_obstacle_layout() {
  const Vector h = Vector::Constant(3, 1.1);
  return {
      {"box_upper_x", Aabb::from_center(vec({2.0, 0.0, 2.4}), h)},
      {"box_upper_y", Aabb::from_center(vec({0.0, 2.0, 2.4}), h)},
      {"box_lower_x", Aabb::from_center(vec({-2.0, 0.0, -2.4}), h)},
      {"box_lower_y", Aabb::from_center(vec({0.0, -2.0, -2.4}), h)},
  };
}

Joint revolute(const Vector3& axis, const Isometry3& origin, double lo, double hi) {
  return Joint{axis, JointType::Revolute, origin, lo, hi};
}

Joint prismatic(const Vector3& axis, const Isometry3& origin, double lo, double hi) {
  return Joint{axis, JointType::Prismatic, origin, lo, hi};
}

constexpr double kPi = std::numbers::pi;

// Object boxes hang below their grasp point.
const Vector3 kObjectBelowGrasp(0.0, 0.0, -0.04);
const Vector kObjectHalf = Vector::Constant(3, 0.03);

Obstacle object_at_grasp(const std::string& id, const Vector3& grasp) {
  return {id, Aabb::from_center(grasp + kObjectBelowGrasp, kObjectHalf)};
}

Scene transport_a_mini() {
  // 4-DOF table arm: yaw, shoulder, elbow and wrist pitch.
  std::vector<Joint> joints = {
      revolute(Vector3::UnitZ(), translation(0, 0, 0.05), -kPi, kPi),
      revolute(Vector3::UnitY(), translation(0, 0, 0.05), -2.2, 2.2),
      revolute(Vector3::UnitY(), translation(0.35, 0, 0), -2.4, 2.4),
      revolute(Vector3::UnitY(), translation(0.30, 0, 0), -2.4, 2.4),
  };
  auto robot = std::make_shared<const MultiRobotSystem>(
      std::vector<SerialChain>{SerialChain("arm", Isometry3::Identity(), joints, translation(0.10, 0, 0))});

  const Vector3 x_a(0.40, 0.30, 0.06);
  const Vector3 x_b(0.40, -0.30, 0.06);

  Scene s;
  s.name = "transport_a_mini";
  s.kind = TaskKind::Robot;
  s.ambient_dim = robot->dof();
  s.lower = robot->lower_limits();
  s.upper = robot->upper_limits();
  s.start = vec({2.0, -0.6, 1.5, 0.4});
  s.free_space.robot = robot;
  s.free_space.obstacles = {
      {"wall", Aabb(vec({0.22, -0.05, -0.05}), vec({0.62, 0.05, 0.20}))},
      object_at_grasp("object", x_a),
  };
  s.manifold_descs = {
      {"free", FreeDesc{}},
      {"pick", PickDesc{0, Vector3::Zero(), x_a}},
      {"transport_upright", OrientationDesc{0, Vector3::UnitZ(), Vector3::UnitZ()}},
      {"place", PickDesc{0, Vector3::Zero(), x_b}},
  };
  s.transitions = {
      {0, AttachEffect{"object", 0, Vector3::Zero()}},
      {2, DetachEffect{"object"}},
  };
  return s;
}

Scene transport_b_mini() {
  auto arm = [](const std::string& name, double base_x) {
    std::vector<Joint> joints = {
        revolute(Vector3::UnitZ(), translation(0, 0, 0.05), -kPi, kPi),
        revolute(Vector3::UnitY(), translation(0, 0, 0.05), -2.2, 2.2),
        revolute(Vector3::UnitY(), translation(0.30, 0, 0), -2.4, 2.4),
    };
    return SerialChain(name, translation(base_x, 0, 0), joints, translation(0.30, 0, 0));
  };
  // Planar base: x/y prismatic joints, tray point 0.15 above the floor.
  std::vector<Joint> base_joints = {
      prismatic(Vector3::UnitX(), Isometry3::Identity(), -0.6, 0.6),
      prismatic(Vector3::UnitY(), Isometry3::Identity(), -0.6, 0.6),
  };
  auto robot = std::make_shared<const MultiRobotSystem>(std::vector<SerialChain>{
      arm("arm_left", -0.55),
      arm("arm_right", 0.55),
      SerialChain("base", Isometry3::Identity(), base_joints, translation(0, 0, 0.15), 2),
  });

  const Vector3 x_a(-0.35, 0.35, 0.15);
  const Vector3 x_b(0.35, 0.35, 0.15);

  Scene s;
  s.name = "transport_b_mini";
  s.kind = TaskKind::Robot;
  s.ambient_dim = robot->dof();
  s.lower = robot->lower_limits();
  s.upper = robot->upper_limits();
  s.start = vec({-1.2, -0.8, 1.6, -1.9, -0.8, 1.6, 0.0, -0.35});
  s.free_space.robot = robot;
  s.free_space.obstacles = {
      {"pillar", Aabb(vec({-0.08, 0.18, 0.0}), vec({0.08, 0.60, 0.45}))},
      object_at_grasp("object", x_a),
  };
  s.manifold_descs = {
      {"free", FreeDesc{}},
      {"pick_left", PickDesc{0, Vector3::Zero(), x_a}},
      {"place_on_base", HandoverDesc{0, Vector3::Zero(), 2, Vector3::Zero()}},
      {"carry", FreeDesc{}},
      {"pick_from_base", HandoverDesc{1, Vector3::Zero(), 2, Vector3::Zero()}},
      {"place", PickDesc{1, Vector3::Zero(), x_b}},
  };
  s.transitions = {
      {0, AttachEffect{"object", 0, Vector3::Zero()}},
      {1, AttachEffect{"object", 2, Vector3::Zero()}},
      {3, AttachEffect{"object", 1, Vector3::Zero()}},
      {4, DetachEffect{"object"}},
  };
  return s;
}

Scene plane_cylinder_point() {
  Scene s;
  s.name = "plane_cylinder_point";
  s.kind = TaskKind::Point;
  s.ambient_dim = 3;
  s.lower = Vector::Constant(3, -3.0);
  s.upper = Vector::Constant(3, 3.0);
  s.start = vec({-2.0, 0.0, 0.0});
  Matrix A(1, 3);
  A << 0, 0, 1;
  s.manifold_descs = {
      {"plane", LinearDesc{A, vec({0.0})}},
      {"unit_cylinder", CylinderDesc{1.0, -1.0}},
      {"goal", PointDesc{vec({1.0, 0.0, 2.0})}},
  };
  return s;
}

Scene line_corner_2d() {
  Scene s;
  s.name = "line_corner_2d";
  s.kind = TaskKind::Point;
  s.ambient_dim = 2;
  s.lower = vec({-1.0, -1.0});
  s.upper = vec({4.0, 4.0});
  s.start = vec({0.0, 0.0});
  Matrix A1(1, 2), A2(1, 2);
  A1 << 0, 1;
  A2 << 1, 0;
  s.manifold_descs = {
      {"line_y0", LinearDesc{A1, vec({0.0})}},
      {"line_x2", LinearDesc{A2, vec({2.0})}},
      {"goal", PointDesc{vec({2.0, 3.0})}},
  };
  return s;
}

}  // namespace

std::vector<std::string> benchmark_scene_names() {
  return {"point3d_free", "point3d_obstacles", "transport_a_mini", "transport_b_mini", "plane_cylinder_point",
          "line_corner_2d"};
}

Scene build_benchmark_scene(const std::string& name) {
  Scene s;
  if (name == "point3d_free") {
    s = point3d_base(name);
  } else if (name == "point3d_obstacles") {
    s = point3d_base(name);
    s.free_space.obstacles = point3d_obstacle_layout();
  } else if (name == "transport_a_mini") {
    s = transport_a_mini();
  } else if (name == "transport_b_mini") {
    s = transport_b_mini();
  } else if (name == "plane_cylinder_point") {
    s = plane_cylinder_point();
  } else if (name == "line_corner_2d") {
    s = line_corner_2d();
  } else {
    std::string msg = "unknown scene '" + name + "'; available:";
    for (const auto& n : benchmark_scene_names()) msg += " " + n;
    throw std::invalid_argument(msg);
  }
  s.finalize();
  return s;
}

}  // namespace psm
