#include "psm/validate.hpp"

#include <cmath>
#include <cstdio>

namespace psm {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ValidationOptions validation_options_for(const PlannerParams& params) {
  ValidationOptions opts;
  opts.eps = params.eps;
  opts.collision_step = params.collision_step;
  return opts;
}

PathValidation validate_path(const Scene& scene, const SolutionPath& path, const ValidationOptions& opts) {
  PathValidation v;
  auto fail = [&](std::string msg) { v.violations.push_back(std::move(msg)); };

  const int n = scene.num_segments();
  const int count = static_cast<int>(path.configs.size());
  const double tol = opts.eps * (1.0 + 1e-9);

  if (count == 0) {
    fail("path is empty");
    return v;
  }
  if (static_cast<int>(path.segment_bounds.size()) != n + 1) {
    fail("expected " + std::to_string(n + 1) + " segment bounds, got " + std::to_string(path.segment_bounds.size()));
    return v;
  }
  if (path.segment_bounds.front() != 0 || path.segment_bounds.back() != count - 1) {
    fail("segment bounds must start at 0 and end at the last configuration");
    return v;
  }
  for (int i = 0; i < n; ++i)
    if (path.segment_bounds[static_cast<std::size_t>(i)] > path.segment_bounds[static_cast<std::size_t>(i + 1)]) {
      fail("segment bounds are not ordered");
      return v;
    }
  for (int j = 0; j < count; ++j)
    if (path.configs[static_cast<std::size_t>(j)].size() != scene.ambient_dim) {
      fail("configuration " + std::to_string(j) + " has wrong dimension");
      return v;
    }

  if (path.configs.front() != scene.start) fail("path does not begin at the start configuration");

  FreeSpaceState fs = scene.free_space;
  for (int i = 0; i < n; ++i) {
    const int lo = path.segment_bounds[static_cast<std::size_t>(i)];
    const int hi = path.segment_bounds[static_cast<std::size_t>(i + 1)];
    const Manifold& m = scene.manifolds[static_cast<std::size_t>(i)];

    std::vector<std::pair<std::string, int>> carried;
    for (const auto& a : fs.attachments) carried.emplace_back(a.object_id, a.chain);
    v.attachments.push_back(std::move(carried));
    v.free_space.push_back(fs);

    for (int j = lo; j <= hi; ++j) {
      const Configuration& q = path.configs[static_cast<std::size_t>(j)];
      const double res = residual_norm(m, q);
      if (!(res <= tol))
        fail("segment " + std::to_string(i) + ", configuration " + std::to_string(j) + ": residual " +
             fmt_double(res) + " on manifold '" + m.name() + "'");
      if (!scene.in_bounds(q)) fail("configuration " + std::to_string(j) + " is out of bounds");
    }
    for (int j = lo; j < hi; ++j) {
      const Configuration& a = path.configs[static_cast<std::size_t>(j)];
      const Configuration& b = path.configs[static_cast<std::size_t>(j + 1)];
      const double len = (b - a).norm();
      if (opts.max_edge > 0.0 && len > opts.max_edge)
        fail("edge " + std::to_string(j) + " has length " + fmt_double(len));
      if (!collision_free_segment(a, b, fs, opts.collision_step))
        fail("edge " + std::to_string(j) + " (segment " + std::to_string(i) + ") is in collision");
    }

    const Configuration& boundary = path.configs[static_cast<std::size_t>(hi)];
    const Manifold& next = scene.manifolds[static_cast<std::size_t>(i + 1)];
    const double res_next = residual_norm(next, boundary);
    if (!(res_next <= tol))
      fail("segment " + std::to_string(i) + " ends off manifold '" + next.name() + "' (residual " +
           fmt_double(res_next) + ")");
    fs = apply_transitions(fs, scene.transitions, i, boundary);
  }

  const double length = path_length(path.configs);
  if (std::abs(length - path.total_cost) > 1e-9 * std::max(1.0, length))
    fail("total_cost " + fmt_double(path.total_cost) + " differs from path length " + fmt_double(length));
  return v;
}

}  // namespace psm
