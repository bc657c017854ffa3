#pragma once

#include <string>
#include <utility>
#include <vector>

#include "psm/planner.hpp"
#include "psm/scene.hpp"

namespace psm {

struct ValidationOptions {
  double eps = 0.01;
  double collision_step = 0.05;
  // Longest admissible edge; <= 0 disables the check.
  double max_edge = 0.0;
};

ValidationOptions validation_options_for(const PlannerParams& params);

struct PathValidation {
  std::vector<std::string> violations;
  // Per segment: (object id, carrying chain) for every attached object.
  std::vector<std::vector<std::pair<std::string, int>>> attachments;
  // Free space each segment was checked against.
  std::vector<FreeSpaceState> free_space;

  bool ok() const { return violations.empty(); }
};

// Replays a solution against the task definition: start, per-segment
// manifold residuals, goal membership, bounds, edge lengths, cost bookkeeping
// and collision freedom under the free space reached by replaying the
// transition rules at each segment boundary.
PathValidation validate_path(const Scene& scene, const SolutionPath& path, const ValidationOptions& opts);

}  // namespace psm
