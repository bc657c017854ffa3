#include "psm/planner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "psm/random.hpp"

namespace psm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_start(const Scene& scene, const PlannerParams& params) {
  if (scene.manifolds.size() < 2) throw std::invalid_argument("planner: scene needs at least two manifolds");
  if (scene.start.size() != scene.ambient_dim) throw std::invalid_argument("planner: start has wrong length");
  if (residual_norm(scene.manifolds.front(), scene.start) > params.eps)
    throw std::invalid_argument("planner: start configuration is not on the first manifold");
}

ExtendParams extend_params(const PlannerParams& params, const Scene& scene) {
  return {effective_gamma(params, scene), params.alpha, scene.ambient_dim, params.collision_step};
}

std::vector<ManifoldPair> manifold_pairs(const Scene& scene) {
  std::vector<ManifoldPair> pairs;
  for (int i = 0; i < scene.num_segments(); ++i)
    pairs.emplace_back(scene.manifolds[static_cast<std::size_t>(i)], scene.manifolds[static_cast<std::size_t>(i + 1)]);
  return pairs;
}

// Steps shared by every PSM* variant after steering: bounds (joint limits)
// and the residual guard on the current manifold.
bool admissible(const Scene& scene, const Manifold& current, const Configuration& q, double eps) {
  return scene.in_bounds(q) && residual_norm(current, q) <= eps;
}

int cheapest(const Tree& tree, const std::vector<int>& ids) {
  int best = -1;
  for (int id : ids)
    if (best < 0 || tree.node(id).cost < tree.node(best).cost) best = id;
  return best;
}

double best_cost(const Tree& tree, const std::vector<int>& ids) {
  const int id = cheapest(tree, ids);
  return id < 0 ? kInf : tree.node(id).cost;
}

// Walks parent links from `id` back to q_start, jumping from each subtree
// seed to its source in the previous subtree.
SolutionPath extract_across_subtrees(const std::vector<Tree>& trees, int id) {
  std::vector<std::vector<Configuration>> segments(trees.size());
  for (int t = static_cast<int>(trees.size()) - 1; t >= 0; --t) {
    const Tree& tree = trees[static_cast<std::size_t>(t)];
    auto& seg = segments[static_cast<std::size_t>(t)];
    int cur = id;
    while (true) {
      const TreeNode& n = tree.node(cur);
      seg.push_back(n.q);
      if (n.parent == kNoParent) break;
      if (tree.node(n.parent).synthetic_root) break;
      cur = n.parent;
    }
    std::reverse(seg.begin(), seg.end());
    id = tree.node(cur).source;
  }

  SolutionPath path;
  path.segment_bounds.push_back(0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const std::size_t first = path.configs.empty() ? 0 : 1;
    for (std::size_t j = first; j < seg.size(); ++j) path.configs.push_back(seg[j]);
    path.segment_bounds.push_back(static_cast<int>(path.configs.size()) - 1);
  }
  path.total_cost = path_length(path.configs);
  return path;
}

PlanResult psm_star_impl(const Scene& scene, const PlannerParams& params, bool greedy) {
  params.validate();
  check_start(scene, params);

  const int n = scene.num_segments();
  const auto pairs = manifold_pairs(scene);
  const ExtendParams ext = extend_params(params, scene);
  const ProjectionOptions proj = params.projection();
  const SteerParams steer = params.steer();
  Rng rng(params.seed);

  PlanResult result;
  FreeSpaceState fs = scene.free_space;
  result.trees.emplace_back();
  result.trees.back().add_root(scene.start, 0);
  std::vector<int> goal_manifold_nodes;

  for (int i = 0; i < n; ++i) {
    Tree& tree = result.trees[static_cast<std::size_t>(i)];
    const ManifoldPair& pair = pairs[static_cast<std::size_t>(i)];
    const bool last = i == n - 1;
    std::vector<int> goal_set;

    for (int iter = 0; iter < params.m; ++iter) {
      const Configuration q_rand = uniform_in_box(rng, scene.lower, scene.upper);
      const int near_id = tree.nearest(q_rand);
      const Configuration q_near = tree.node(near_id).q;
      const SteerOutcome out = psm_steer(steer, q_near, q_rand, pair, proj, rng);

      if (out.q && admissible(scene, pair.current, *out.q, params.eps)) {
        const Configuration& q_new = *out.q;
        const int id = rrt_star_extend(tree, near_id, q_new, fs, ext, i);
        if (id >= 0 && residual_norm(pair.next, q_new) < params.eps) {
          bool separated = true;
          for (int g : goal_set)
            if ((tree.node(g).q - q_new).norm() < params.rho) separated = false;
          if (separated) goal_set.push_back(id);
          if (last) goal_manifold_nodes.push_back(id);
        }
      }
      if (last) result.best_cost_history.push_back(best_cost(tree, goal_manifold_nodes));
    }

    result.goal_sets.push_back(goal_set);
    if (goal_set.empty()) {
      result.failed_phase = i;
      result.failure = "no intersection with manifold '" + pair.next.name() + "' found in phase " + std::to_string(i);
      return result;
    }
    if (last) break;

    // Seed the next subtree with the intersection nodes (costs preserved)
    // below a synthetic root.
    std::vector<int> seeds = greedy ? std::vector<int>{cheapest(tree, goal_set)} : goal_set;
    const FreeSpaceState next_fs = apply_transitions(fs, scene.transitions, i, tree.node(goal_set.front()).q);
    Tree next;
    const int root = next.add_synthetic_root();
    for (int g : seeds) {
      const int id = next.add_node(tree.node(g).q, root, tree.node(g).cost, i + 1);
      next.node(id).source = g;
    }
    result.trees.push_back(std::move(next));
    fs = next_fs;
  }

  const int best = cheapest(result.trees.back(), goal_manifold_nodes);
  result.path = extract_across_subtrees(result.trees, best);
  return result;
}

}  // namespace

void PlannerParams::validate() const {
  steer().validate();
  if (!(eps > 0.0)) throw std::invalid_argument("params: eps must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("params: rho must be non-negative");
  if (m < 1) throw std::invalid_argument("params: m must be >= 1");
  if (max_project_iters < 1) throw std::invalid_argument("params: max_project_iters must be >= 1");
  if (!(collision_step > 0.0)) throw std::invalid_argument("params: collision_step must be positive");
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw std::invalid_argument("params: goal_bias must lie in [0, 1]");
  if (ik_retries < 1) throw std::invalid_argument("params: ik_retries must be >= 1");
}

ProjectionOptions PlannerParams::projection() const {
  ProjectionOptions opts;
  opts.eps = eps;
  opts.max_iters = max_project_iters;
  return opts;
}

PlannerParams point_task_defaults() { return PlannerParams{}; }

PlannerParams robot_task_defaults() {
  PlannerParams p;
  p.alpha = 1.0;
  p.beta = 0.3;
  p.eps = 1e-5;
  p.rho = 0.5;
  p.r = 0.5;
  p.m = 2000;
  return p;
}

PlannerParams defaults_for(const Scene& scene) {
  return scene.kind == TaskKind::Robot ? robot_task_defaults() : point_task_defaults();
}

double effective_gamma(const PlannerParams& params, const Scene& scene) {
  if (params.gamma_rrt > 0.0) return params.gamma_rrt;
  return 2.0 * (scene.upper - scene.lower).maxCoeff();
}

double path_length(const std::vector<Configuration>& configs) {
  double total = 0.0;
  for (std::size_t i = 1; i < configs.size(); ++i) total += (configs[i] - configs[i - 1]).norm();
  return total;
}

std::string planner_id(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Psm: return "psm";
    case PlannerKind::PsmGreedy: return "psm-greedy";
    case PlannerKind::PsmSingleTree: return "psm-single";
    case PlannerKind::RrtStarIk: return "rrtstar-ik";
  }
  return "?";
}

std::vector<std::string> planner_ids() { return {"psm", "psm-greedy", "psm-single", "rrtstar-ik"}; }

std::optional<PlannerKind> parse_planner(const std::string& id) {
  for (auto k : {PlannerKind::Psm, PlannerKind::PsmGreedy, PlannerKind::PsmSingleTree, PlannerKind::RrtStarIk})
    if (planner_id(k) == id) return k;
  return std::nullopt;
}

PlanResult psm_star(const Scene& scene, const PlannerParams& params) { return psm_star_impl(scene, params, false); }

PlanResult psm_star_greedy(const Scene& scene, const PlannerParams& params) {
  return psm_star_impl(scene, params, true);
}

PlanResult psm_star_single_tree(const Scene& scene, const PlannerParams& params) {
  params.validate();
  check_start(scene, params);

  const int n = scene.num_segments();
  const auto pairs = manifold_pairs(scene);
  const ExtendParams ext = extend_params(params, scene);
  const ProjectionOptions proj = params.projection();
  const SteerParams steer = params.steer();
  Rng rng(params.seed);

  PlanResult result;
  result.trees.emplace_back();
  Tree& tree = result.trees.back();
  tree.add_root(scene.start, 0);

  // Free space per manifold index, fixed by the first node reaching it.
  std::vector<std::optional<FreeSpaceState>> free_space(static_cast<std::size_t>(n + 1));
  free_space[0] = scene.free_space;
  std::vector<int> goal_manifold_nodes;
  auto not_on_goal = [n](const TreeNode& node) { return node.manifold < n; };

  const long total = static_cast<long>(n) * params.m;
  for (long iter = 0; iter < total; ++iter) {
    const Configuration q_rand = uniform_in_box(rng, scene.lower, scene.upper);
    const int near_id = tree.nearest(q_rand, not_on_goal);
    const Configuration q_near = tree.node(near_id).q;
    const int i = tree.node(near_id).manifold;
    const ManifoldPair& pair = pairs[static_cast<std::size_t>(i)];
    const SteerOutcome out = psm_steer(steer, q_near, q_rand, pair, proj, rng);

    if (out.q && admissible(scene, pair.current, *out.q, params.eps)) {
      const Configuration& q_new = *out.q;
      const bool promoted = residual_norm(pair.next, q_new) < params.eps;
      const FreeSpaceState& fs = *free_space[static_cast<std::size_t>(i)];
      const int id = rrt_star_extend(tree, near_id, q_new, fs, ext, promoted ? i + 1 : i);
      if (id >= 0 && promoted) {
        auto& next_fs = free_space[static_cast<std::size_t>(i + 1)];
        if (!next_fs) next_fs = apply_transitions(fs, scene.transitions, i, q_new);
        if (i + 1 == n) goal_manifold_nodes.push_back(id);
      }
    }
    result.best_cost_history.push_back(best_cost(tree, goal_manifold_nodes));
  }

  if (goal_manifold_nodes.empty()) {
    int reached = 0;
    for (int id = 0; id < tree.size(); ++id) reached = std::max(reached, tree.node(id).manifold);
    result.failed_phase = reached;
    result.failure = "single tree did not reach the goal manifold (furthest manifold " + std::to_string(reached) + ")";
    return result;
  }

  const int best = cheapest(tree, goal_manifold_nodes);
  std::vector<int> chain;
  for (int cur = best; cur != kNoParent; cur = tree.node(cur).parent) chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());

  SolutionPath path;
  path.segment_bounds.push_back(0);
  for (std::size_t j = 0; j < chain.size(); ++j) {
    const TreeNode& node = tree.node(chain[j]);
    path.configs.push_back(node.q);
    if (j > 0 && node.manifold != tree.node(chain[j - 1]).manifold)
      path.segment_bounds.push_back(static_cast<int>(j));
  }
  // Promoted nodes close a segment; the last one is the goal node itself.
  path.total_cost = path_length(path.configs);
  result.path = std::move(path);
  return result;
}

PlanResult rrt_star_ik(const Scene& scene, const PlannerParams& params) {
  params.validate();
  check_start(scene, params);

  const int n = scene.num_segments();
  const auto pairs = manifold_pairs(scene);
  const ExtendParams ext = extend_params(params, scene);
  const ProjectionOptions proj = params.projection();
  Rng rng(params.seed);

  PlanResult result;
  FreeSpaceState fs = scene.free_space;
  Configuration segment_start = scene.start;
  double start_cost = 0.0;
  std::vector<std::vector<Configuration>> segments;

  for (int i = 0; i < n; ++i) {
    const ManifoldPair& pair = pairs[static_cast<std::size_t>(i)];

    // Goal on M_i & M_{i+1} from a random configuration projected onto the
    // intersection.
    std::optional<Configuration> goal;
    for (int attempt = 0; attempt < params.ik_retries && !goal; ++attempt) {
      auto q = project_detailed(uniform_in_box(rng, scene.lower, scene.upper), pair.intersection, proj).q;
      if (q && scene.in_bounds(*q) && config_collision_free(*q, fs)) goal = std::move(q);
    }
    result.trees.emplace_back();
    Tree& tree = result.trees.back();
    tree.add_root(segment_start, i, start_cost);
    if (!goal) {
      result.failed_phase = i;
      result.failure = "inverse kinematics found no goal on the intersection in phase " + std::to_string(i);
      return result;
    }

    for (int iter = 0; iter < params.m; ++iter) {
      const bool toward_goal = uniform01(rng) < params.goal_bias;
      const Configuration q_rand = toward_goal ? *goal : uniform_in_box(rng, scene.lower, scene.upper);
      const int near_id = tree.nearest(q_rand);
      const Configuration q_near = tree.node(near_id).q;
      const Vector d = steer_point(q_near, q_rand, pair.current);
      const double norm = d.norm();
      if (norm < kZeroDirection) continue;
      const Configuration q_step = q_near + (std::min(params.alpha, norm) / norm) * d;
      const auto q_new = project_detailed(q_step, pair.current, proj).q;
      if (!q_new || !admissible(scene, pair.current, *q_new, params.eps)) continue;
      rrt_star_extend(tree, near_id, *q_new, fs, ext, i);
    }

    // Connect the cheapest node within alpha of the goal.
    int best = -1;
    double best_c = kInf;
    for (int id = 0; id < tree.size(); ++id) {
      const TreeNode& node = tree.node(id);
      const double dist = (node.q - *goal).norm();
      if (dist > params.alpha) continue;
      const double c = node.cost + dist;
      if (c < best_c && collision_free_segment(node.q, *goal, fs, params.collision_step)) {
        best = id;
        best_c = c;
      }
    }
    if (best < 0) {
      result.failed_phase = i;
      result.failure = "tree did not reach the inverse kinematics goal in phase " + std::to_string(i);
      return result;
    }
    const int goal_id = tree.add_node(*goal, best, best_c, i);

    std::vector<Configuration> seg;
    for (int cur = goal_id; cur != kNoParent; cur = tree.node(cur).parent) seg.push_back(tree.node(cur).q);
    std::reverse(seg.begin(), seg.end());
    segments.push_back(std::move(seg));

    fs = apply_transitions(fs, scene.transitions, i, *goal);
    segment_start = *goal;
    start_cost = best_c;
  }

  SolutionPath path;
  path.segment_bounds.push_back(0);
  for (const auto& seg : segments) {
    const std::size_t first = path.configs.empty() ? 0 : 1;
    for (std::size_t j = first; j < seg.size(); ++j) path.configs.push_back(seg[j]);
    path.segment_bounds.push_back(static_cast<int>(path.configs.size()) - 1);
  }
  path.total_cost = path_length(path.configs);
  result.path = std::move(path);
  return result;
}

PlanResult plan(PlannerKind kind, const Scene& scene, const PlannerParams& params) {
  switch (kind) {
    case PlannerKind::Psm: return psm_star(scene, params);
    case PlannerKind::PsmGreedy: return psm_star_greedy(scene, params);
    case PlannerKind::PsmSingleTree: return psm_star_single_tree(scene, params);
    case PlannerKind::RrtStarIk: return rrt_star_ik(scene, params);
  }
  throw std::invalid_argument("unknown planner");
}

}  // namespace psm
