#include "psm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psm::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json vec_json(const Eigen::Ref<const Vector>& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector json_vec(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a numeric array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Vector3 json_vec3(const Json& j) {
  const Vector v = json_vec(j);
  if (v.size() != 3) throw std::invalid_argument("expected a 3-vector");
  return v;
}

Json pose_json(const Isometry3& T) {
  const Vector3 ypr = T.linear().eulerAngles(2, 1, 0);
  return {{"xyz", vec_json(T.translation())}, {"rpy", vec_json(Vector3(ypr(2), ypr(1), ypr(0)))}};
}

Isometry3 json_pose(const Json& j) {
  Isometry3 T = Isometry3::Identity();
  if (j.contains("xyz")) T.translation() = json_vec3(j.at("xyz"));
  if (j.contains("rpy")) {
    const Vector3 rpy = json_vec3(j.at("rpy"));
    T.linear() = (Eigen::AngleAxisd(rpy(2), Vector3::UnitZ()) * Eigen::AngleAxisd(rpy(1), Vector3::UnitY()) *
                  Eigen::AngleAxisd(rpy(0), Vector3::UnitX()))
                     .toRotationMatrix();
  }
  return T;
}

Json chain_json(const SerialChain& c) {
  Json joints = Json::array();
  for (const auto& jt : c.joints())
    joints.push_back({{"axis", vec_json(jt.axis)},
                      {"type", jt.type == JointType::Revolute ? "revolute" : "prismatic"},
                      {"origin", pose_json(jt.origin)},
                      {"limits", {jt.lower, jt.upper}}});
  return {{"name", c.name()},
          {"base", pose_json(c.base())},
          {"tool", pose_json(c.tool())},
          {"geometry_start", c.geometry_start()},
          {"joints", joints}};
}

SerialChain json_chain(const Json& j) {
  std::vector<Joint> joints;
  for (const auto& jj : j.at("joints")) {
    Joint jt;
    jt.axis = json_vec3(jj.at("axis"));
    const std::string type = jj.value("type", "revolute");
    if (type == "revolute")
      jt.type = JointType::Revolute;
    else if (type == "prismatic")
      jt.type = JointType::Prismatic;
    else
      throw std::invalid_argument("unknown joint type '" + type + "'");
    if (jj.contains("origin")) jt.origin = json_pose(jj.at("origin"));
    if (jj.contains("limits")) {
      jt.lower = jj.at("limits").at(0).get<double>();
      jt.upper = jj.at("limits").at(1).get<double>();
    }
    joints.push_back(jt);
  }
  return SerialChain(j.value("name", "chain"), j.contains("base") ? json_pose(j.at("base")) : Isometry3::Identity(),
                     std::move(joints), j.contains("tool") ? json_pose(j.at("tool")) : Isometry3::Identity(),
                     j.value("geometry_start", 0));
}

Json manifold_json(const ManifoldDesc& d) {
  Json out = {{"name", d.name}};
  std::visit(overloaded{
                 [&](const ParaboloidDesc& p) {
                   out["type"] = "paraboloid";
                   out["params"] = {{"coef", p.coef}, {"offset", p.offset}};
                 },
                 [&](const CylinderDesc& p) {
                   out["type"] = "cylinder";
                   out["params"] = {{"coef", p.coef}, {"offset", p.offset}};
                 },
                 [&](const SphereDesc& p) {
                   out["type"] = "sphere";
                   out["params"] = {{"center", vec_json(p.center)}, {"radius", p.radius}};
                 },
                 [&](const LinearDesc& p) {
                   Json rows = Json::array();
                   for (Eigen::Index r = 0; r < p.A.rows(); ++r) rows.push_back(vec_json(p.A.row(r).transpose()));
                   out["type"] = "linear";
                   out["params"] = {{"A", rows}, {"b", vec_json(p.b)}};
                 },
                 [&](const PointDesc& p) {
                   out["type"] = "point";
                   out["params"] = {{"target", vec_json(p.target)}};
                 },
                 [&](const FreeDesc&) {
                   out["type"] = "free";
                   out["params"] = Json::object();
                 },
                 [&](const PickDesc& p) {
                   out["type"] = "pick";
                   out["params"] = {{"chain", p.chain}, {"point", vec_json(p.point)}, {"target", vec_json(p.target)}};
                 },
                 [&](const HandoverDesc& p) {
                   out["type"] = "handover";
                   out["params"] = {{"chain1", p.chain1},
                                    {"point1", vec_json(p.point1)},
                                    {"chain2", p.chain2},
                                    {"point2", vec_json(p.point2)}};
                 },
                 [&](const OrientationDesc& p) {
                   out["type"] = "orientation";
                   out["params"] = {{"chain", p.chain}, {"axis", vec_json(p.axis)}, {"target", vec_json(p.target)}};
                 },
             },
             d.shape);
  return out;
}

ManifoldDesc json_manifold(const Json& j) {
  ManifoldDesc d;
  const std::string type = j.at("type").get<std::string>();
  d.name = j.value("name", type);
  const Json params = j.value("params", Json::object());
  if (type == "paraboloid") {
    d.shape = ParaboloidDesc{params.at("coef").get<double>(), params.at("offset").get<double>()};
  } else if (type == "cylinder") {
    d.shape = CylinderDesc{params.at("coef").get<double>(), params.at("offset").get<double>()};
  } else if (type == "sphere") {
    d.shape = SphereDesc{json_vec(params.at("center")), params.at("radius").get<double>()};
  } else if (type == "linear") {
    const Json& rows = params.at("A");
    const Vector b = json_vec(params.at("b"));
    if (rows.empty()) throw std::invalid_argument("linear manifold needs at least one row");
    Matrix A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Vector row = json_vec(rows[r]);
      if (row.size() != A.cols()) throw std::invalid_argument("linear manifold rows differ in length");
      A.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    d.shape = LinearDesc{A, b};
  } else if (type == "point") {
    d.shape = PointDesc{json_vec(params.at("target"))};
  } else if (type == "free") {
    d.shape = FreeDesc{};
  } else if (type == "pick") {
    d.shape = PickDesc{params.value("chain", 0), json_vec3(params.value("point", Json{0, 0, 0})),
                       json_vec3(params.at("target"))};
  } else if (type == "handover") {
    d.shape = HandoverDesc{params.at("chain1").get<int>(), json_vec3(params.value("point1", Json{0, 0, 0})),
                           params.at("chain2").get<int>(), json_vec3(params.value("point2", Json{0, 0, 0}))};
  } else if (type == "orientation") {
    d.shape = OrientationDesc{params.value("chain", 0), json_vec3(params.value("axis", Json{0, 0, 1})),
                              json_vec3(params.value("target", Json{0, 0, 1}))};
  } else {
    throw std::invalid_argument("unknown manifold type '" + type + "'");
  }
  return d;
}

Json effect_json(const TransitionEffect& e) {
  return std::visit(overloaded{
                        [](const NoEffect&) -> Json { return {{"type", "none"}}; },
                        [](const AttachEffect& a) -> Json {
                          return {{"type", "attach"}, {"object", a.object_id}, {"chain", a.chain},
                                  {"point", vec_json(a.point)}};
                        },
                        [](const DetachEffect& d) -> Json { return {{"type", "detach"}, {"object", d.object_id}}; },
                    },
                    e);
}

TransitionEffect json_effect(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "none") return NoEffect{};
  if (type == "attach")
    return AttachEffect{j.at("object").get<std::string>(), j.value("chain", 0),
                        json_vec3(j.value("point", Json{0, 0, 0}))};
  if (type == "detach") return DetachEffect{j.at("object").get<std::string>()};
  throw std::invalid_argument("unknown transition effect '" + type + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json scene_to_json(const Scene& s) {
  Json j;
  j["name"] = s.name;
  j["kind"] = s.kind == TaskKind::Robot ? "robot" : "point";
  j["ambient_dim"] = s.ambient_dim;
  j["bounds"] = {{"lower", vec_json(s.lower)}, {"upper", vec_json(s.upper)}};
  if (s.free_space.robot) {
    Json chains = Json::array();
    for (const auto& c : s.free_space.robot->chains()) chains.push_back(chain_json(c));
    j["robot"] = {{"chains", chains}};
  }
  j["manifolds"] = Json::array();
  for (const auto& d : s.manifold_descs) j["manifolds"].push_back(manifold_json(d));
  j["start"] = vec_json(s.start);
  j["obstacles"] = Json::array();
  for (const auto& o : s.free_space.obstacles)
    j["obstacles"].push_back({{"id", o.id}, {"min", vec_json(o.box.min_corner)}, {"max", vec_json(o.box.max_corner)}});
  j["transitions"] = Json::array();
  for (const auto& t : s.transitions) j["transitions"].push_back({{"trigger", t.trigger}, {"effect", effect_json(t.effect)}});
  return j;
}

Scene scene_from_json(const Json& j) {
  Scene s;
  s.name = j.value("name", "custom");
  s.ambient_dim = j.at("ambient_dim").get<int>();
  s.lower = json_vec(j.at("bounds").at("lower"));
  s.upper = json_vec(j.at("bounds").at("upper"));
  if (j.contains("robot")) {
    std::vector<SerialChain> chains;
    for (const auto& c : j.at("robot").at("chains")) chains.push_back(json_chain(c));
    s.free_space.robot = std::make_shared<const MultiRobotSystem>(std::move(chains));
  }
  s.kind = j.value("kind", s.free_space.robot ? "robot" : "point") == "robot" ? TaskKind::Robot : TaskKind::Point;
  for (const auto& m : j.at("manifolds")) s.manifold_descs.push_back(json_manifold(m));
  s.start = json_vec(j.at("start"));
  int unnamed = 0;
  for (const auto& o : j.value("obstacles", Json::array())) {
    std::string id = o.value("id", "");
    if (id.empty()) id = "obstacle_" + std::to_string(unnamed++);
    s.free_space.obstacles.push_back({id, Aabb(json_vec(o.at("min")), json_vec(o.at("max")))});
  }
  for (const auto& t : j.value("transitions", Json::array()))
    s.transitions.push_back({t.at("trigger").get<int>(), json_effect(t.at("effect"))});
  s.finalize();
  return s;
}

Scene load_scene(const std::string& id_or_path) {
  for (const auto& name : benchmark_scene_names())
    if (name == id_or_path) return build_benchmark_scene(name);
  std::ifstream in(id_or_path);
  if (!in) return build_benchmark_scene(id_or_path);  // reports the available scenes
  return scene_from_json(Json::parse(in));
}

Json params_to_json(const PlannerParams& p) {
  return {{"alpha", p.alpha},
          {"beta", p.beta},
          {"eps", p.eps},
          {"rho", p.rho},
          {"r", p.r},
          {"m", p.m},
          {"gamma_rrt", p.gamma_rrt},
          {"seed", p.seed},
          {"max_project_iters", p.max_project_iters},
          {"collision_step", p.collision_step},
          {"goal_bias", p.goal_bias},
          {"ik_retries", p.ik_retries}};
}

PlannerParams params_from_json(const Json& j, PlannerParams p) {
  p.alpha = j.value("alpha", p.alpha);
  p.beta = j.value("beta", p.beta);
  p.eps = j.value("eps", p.eps);
  p.rho = j.value("rho", p.rho);
  p.r = j.value("r", p.r);
  p.m = j.value("m", p.m);
  p.gamma_rrt = j.value("gamma_rrt", p.gamma_rrt);
  p.seed = j.value("seed", p.seed);
  p.max_project_iters = j.value("max_project_iters", p.max_project_iters);
  p.collision_step = j.value("collision_step", p.collision_step);
  p.goal_bias = j.value("goal_bias", p.goal_bias);
  p.ik_retries = j.value("ik_retries", p.ik_retries);
  p.validate();
  return p;
}

void write_path_csv(std::ostream& os, const SolutionPath& path) {
  const Eigen::Index k = path.configs.empty() ? 0 : path.configs.front().size();
  os << "segment";
  for (Eigen::Index i = 0; i < k; ++i) os << ",q" << i;
  os << '\n';
  for (int s = 0; s < path.num_segments(); ++s) {
    for (int j = path.segment_bounds[static_cast<std::size_t>(s)]; j <= path.segment_bounds[static_cast<std::size_t>(s + 1)];
         ++j) {
      os << s;
      const Configuration& q = path.configs[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < q.size(); ++i) os << ',' << format_double(q(i));
      os << '\n';
    }
  }
}

SolutionPath read_path_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("segment", 0) != 0)
    throw std::runtime_error("path file: missing 'segment,q0,...' header");

  std::vector<std::vector<Configuration>> segments;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    int segment = -1;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      try {
        if (first)
          segment = std::stoi(cell);
        else
          values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("path file: bad value '" + cell + "' on row " + std::to_string(row));
      }
      first = false;
    }
    if (segment < 0 || segment > static_cast<int>(segments.size()) ||
        (segment < static_cast<int>(segments.size()) - 1))
      throw std::runtime_error("path file: segments must be listed in order (row " + std::to_string(row) + ")");
    if (segment == static_cast<int>(segments.size())) segments.emplace_back();
    segments.back().push_back(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  if (segments.empty()) throw std::runtime_error("path file: no configurations");

  SolutionPath path;
  path.segment_bounds.push_back(0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    if (s > 0) {
      if (seg.front() != path.configs.back())
        throw std::runtime_error("path file: segment " + std::to_string(s) +
                                 " does not start where segment " + std::to_string(s - 1) + " ends");
    }
    for (std::size_t j = s == 0 ? 0 : 1; j < seg.size(); ++j) path.configs.push_back(seg[j]);
    path.segment_bounds.push_back(static_cast<int>(path.configs.size()) - 1);
  }
  path.total_cost = path_length(path.configs);
  return path;
}

}  // namespace psm::io
