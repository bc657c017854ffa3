#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psm/scene.hpp"
#include "psm/steering.hpp"
#include "psm/tree.hpp"

namespace psm {

struct PlannerParams {
  double alpha = 1.0;   // max step size
  double beta = 0.1;    // constraint-steering probability
  double eps = 0.01;    // constraint threshold
  double rho = 0.1;     // duplicate threshold between intersection nodes
  double r = 1.5;       // projection distance
  int m = 1200;         // iterations per manifold
  double gamma_rrt = 0.0;  // rewiring scale; <= 0 selects 2 * span of C
  std::uint64_t seed = 0;
  int max_project_iters = 200;
  double collision_step = 0.05;
  double goal_bias = 0.1;  // RRT*+IK only
  int ik_retries = 100;    // RRT*+IK only

  void validate() const;
  SteerParams steer() const { return {alpha, beta, r}; }
  ProjectionOptions projection() const;
};

// Parameter sets used for the point tasks and the robot transport tasks.
PlannerParams point_task_defaults();
PlannerParams robot_task_defaults();
PlannerParams defaults_for(const Scene& scene);

// Rewiring scale actually used for a scene (resolves gamma_rrt <= 0).
double effective_gamma(const PlannerParams& params, const Scene& scene);

// Configurations of a solution. Segment i (on manifold i) spans
// configs[segment_bounds[i]] .. configs[segment_bounds[i + 1]]; the shared
// index is the intersection configuration tau_i(1) = tau_{i+1}(0).
struct SolutionPath {
  std::vector<Configuration> configs;
  std::vector<int> segment_bounds;
  double total_cost = 0.0;

  int num_segments() const { return static_cast<int>(segment_bounds.size()) - 1; }
};

double path_length(const std::vector<Configuration>& configs);

enum class PlannerKind { Psm, PsmGreedy, PsmSingleTree, RrtStarIk };

std::string planner_id(PlannerKind kind);
std::vector<std::string> planner_ids();
// Accepts psm | psm-greedy | psm-single | rrtstar-ik.
std::optional<PlannerKind> parse_planner(const std::string& id);

struct PlanResult {
  std::optional<SolutionPath> path;
  int failed_phase = -1;
  std::string failure;

  // Trees as grown: one per phase for PSM* and RRT*+IK, a single tree for
  // the single-tree variant.
  std::vector<Tree> trees;
  // Intersection node ids per phase (PSM* variants).
  std::vector<std::vector<int>> goal_sets;
  // Lowest cost reaching the goal manifold after each iteration of the final
  // phase (infinity before the first hit).
  std::vector<double> best_cost_history;

  bool success() const { return path.has_value(); }
};

PlanResult psm_star(const Scene& scene, const PlannerParams& params);
PlanResult psm_star_greedy(const Scene& scene, const PlannerParams& params);
PlanResult psm_star_single_tree(const Scene& scene, const PlannerParams& params);
PlanResult rrt_star_ik(const Scene& scene, const PlannerParams& params);

PlanResult plan(PlannerKind kind, const Scene& scene, const PlannerParams& params);

}  // namespace psm
