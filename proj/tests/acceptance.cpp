// Benchmark-level acceptance checks. Prints one PASS/FAIL line per criterion
// and exits nonzero if any criterion fails that was not named with
// --allow-red.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "psm/bench.hpp"
#include "psm/validate.hpp"

using namespace psm;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

std::vector<bench::RunOutput> runs(const std::string& scene, PlannerKind kind, const PlannerParams& params,
                                   int seeds = 10) {
  return bench::run_batch(build_benchmark_scene(scene), kind, params, bench::seed_range(0, seeds));
}

bench::Summary summarize(const std::vector<bench::RunOutput>& out) {
  std::vector<bench::RunRecord> records;
  for (const auto& o : out) records.push_back(o.record);
  return bench::aggregate(records).front();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

std::string describe(const bench::Summary& s) {
  return std::to_string(s.successes) + "/" + std::to_string(s.runs) + " solved, " + fmt(s.mean) + " +- " + fmt(s.std);
}

std::vector<double> lengths(const std::vector<bench::RunOutput>& out) {
  std::vector<double> v;
  for (const auto& o : out)
    if (o.record.path_length) v.push_back(*o.record.path_length);
  return v;
}

// Every successful path replays cleanly against its scene.
int invalid_paths(const std::string& scene_name, const std::vector<bench::RunOutput>& out, const PlannerParams& p) {
  const Scene scene = build_benchmark_scene(scene_name);
  int bad = 0;
  for (const auto& o : out)
    if (o.path && !validate_path(scene, *o.path, validation_options_for(p)).ok()) ++bad;
  return bad;
}

Verdict point3d_free() {
  Verdict v;
  const auto out = runs("point3d_free", PlannerKind::Psm, point_task_defaults());
  const auto s = summarize(out);
  // Straight line from (3.5, 3.5, 4.45) to the origin-side goal (-3.5, -3.5, -4.45).
  const double lower = std::sqrt(7.0 * 7.0 + 7.0 * 7.0 + 8.9 * 8.9);
  const auto l = lengths(out);
  v.require(s.successes == 10, "10/10 success");
  v.require(s.mean >= 14.3 && s.mean <= 15.3, "mean in [14.3, 15.3]");
  v.require(!l.empty() && *std::min_element(l.begin(), l.end()) >= lower, "every cost >= " + fmt(lower));
  v.detail << " " << describe(s) << ", min " << (l.empty() ? NAN : *std::min_element(l.begin(), l.end()))
           << " vs bound " << fmt(lower);
  return v;
}

Verdict point3d_obstacles() {
  Verdict v;
  const PlannerParams p = point_task_defaults();
  const auto out = runs("point3d_obstacles", PlannerKind::Psm, p);
  const auto s = summarize(out);
  const int bad = invalid_paths("point3d_obstacles", out, p);
  v.require(s.successes == 10, "10/10 success");
  v.require(s.mean >= 15.5 && s.mean <= 17.5, "mean in [15.5, 17.5]");
  v.require(bad == 0, "all paths validate");
  v.detail << " " << describe(s) << ", invalid paths " << bad;
  return v;
}

Verdict variant_ordering() {
  Verdict v;
  const PlannerParams p = point_task_defaults();
  const auto psm = summarize(runs("point3d_free", PlannerKind::Psm, p));
  const auto greedy = summarize(runs("point3d_free", PlannerKind::PsmGreedy, p));
  const auto single = summarize(runs("point3d_free", PlannerKind::PsmSingleTree, p));
  const auto rrt = summarize(runs("point3d_free", PlannerKind::RrtStarIk, p));
  v.require(greedy.mean - psm.mean >= 0.8, "greedy - psm >= 0.8");
  v.require(std::abs(single.mean - psm.mean) <= 0.5, "|single - psm| <= 0.5");
  v.require(rrt.mean >= psm.mean, "rrt mean >= psm mean");
  v.require(rrt.std >= 3.0 * psm.std, "rrt std >= 3 psm std");
  v.detail << " psm " << describe(psm) << "; greedy " << describe(greedy) << "; single " << describe(single)
           << "; rrtstar-ik " << describe(rrt);
  return v;
}

Verdict sweep_trends() {
  Verdict v;
  const Scene scene = build_benchmark_scene("point3d_free");
  const PlannerParams p = point_task_defaults();
  const auto rho = bench::sweep({bench::SweepParameter::Rho, {0.1, 1.0, 3.0, 10.0}, 10, 0}, scene, PlannerKind::Psm, p);
  const auto m = bench::sweep({bench::SweepParameter::M, {200, 600, 1200}, 10, 0}, scene, PlannerKind::Psm, p);
  const auto greedy = summarize(runs("point3d_free", PlannerKind::PsmGreedy, p));
  v.detail << " rho:";
  for (std::size_t i = 0; i < rho.size(); ++i) {
    v.detail << " " << fmt(rho[i].summary.mean, 3);
    if (i == 0) continue;
    const double sigma = std::max(rho[i].summary.std, rho[i - 1].summary.std);
    v.require(rho[i].summary.mean >= rho[i - 1].summary.mean - sigma, "rho means non-decreasing within 1 sigma");
  }
  v.require(std::abs(rho.back().summary.mean - greedy.mean) <= 1.0, "rho=10 within 1.0 of greedy");
  v.detail << " (greedy " << fmt(greedy.mean, 3) << "); m:";
  for (std::size_t i = 0; i < m.size(); ++i) {
    v.detail << " " << fmt(m[i].summary.mean, 3);
    if (i > 0) v.require(m[i].summary.mean <= m[i - 1].summary.mean, "m means non-increasing");
  }
  return v;
}

// Plane z = 0 to the unit cylinder to the point (1, 0, 2), from (-2, 0, 0):
// leave the plane at angle theta on the circle, then follow the cylinder
// helix to the goal.
double plane_cylinder_optimum() {
  double best = INFINITY;
  for (double t = -std::numbers::pi; t <= std::numbers::pi; t += 1e-4) {
    const double planar = std::hypot(-2.0 - std::cos(t), std::sin(t));
    best = std::min(best, planar + std::sqrt(t * t + 4.0));
  }
  return best;
}

Verdict plane_cylinder() {
  Verdict v;
  PlannerParams p = point_task_defaults();
  p.m = 3000;
  const auto out = runs("plane_cylinder_point", PlannerKind::Psm, p);
  const auto s = summarize(out);
  const auto l = lengths(out);
  const double j_star = plane_cylinder_optimum();
  const double lo = l.empty() ? NAN : *std::min_element(l.begin(), l.end());
  v.require(s.successes == 10, "10/10 success");
  v.require(s.mean <= 1.1 * j_star, "mean <= 1.1 J*");
  v.require(lo >= j_star - 1e-6, "every cost >= J* - 1e-6");
  v.detail << " J* " << fmt(j_star, 5) << ", " << describe(s) << ", min " << fmt(lo, 5);
  return v;
}

using Bookkeeping = std::vector<std::vector<std::pair<std::string, int>>>;

Verdict transport(const std::string& scene, const Bookkeeping& expected) {
  Verdict v;
  const PlannerParams p = robot_task_defaults();
  const auto out = runs(scene, PlannerKind::Psm, p);
  const auto s = summarize(out);
  const Scene sc = build_benchmark_scene(scene);
  int bad = 0, wrong_attach = 0;
  for (const auto& o : out) {
    if (!o.path) continue;
    const auto val = validate_path(sc, *o.path, validation_options_for(p));
    if (!val.ok()) ++bad;
    if (val.attachments != expected) ++wrong_attach;
  }
  v.require(s.successes >= 9, ">= 9/10 success");
  v.require(bad == 0, "residual, continuity and collision checks");
  v.require(wrong_attach == 0, "attachment bookkeeping");
  v.detail << " " << describe(s) << ", invalid " << bad << ", bookkeeping mismatches " << wrong_attach;
  return v;
}

// Runs the named unit test cases and reports their doctest tallies.
bool run_suite(const std::string& binary, const std::string& filter, std::string& summary) {
  const std::string cmd = "\"" + binary + "\" --test-case=\"" + filter + "\" 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return false;
  std::string text;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) text += buf.data();
  const int status = pclose(pipe);
  std::smatch match;
  static const std::regex tally(R"(test cases:\s*(\d+)\s*\|\s*(\d+) passed\s*\|\s*(\d+) failed)");
  if (!std::regex_search(text, match, tally)) return false;
  summary = match[2].str() + "/" + match[1].str();
  return status == 0 && std::stoi(match[1].str()) > 0 && match[3].str() == "0";
}

Verdict property_suites(const std::string& binary) {
  Verdict v;
  const std::vector<std::pair<std::string, std::string>> suites = {
      {"jacobian-vs-fd", "analytic Jacobians match finite differences*"},
      {"nullspace-residual", "steer_point: tangent*"},
      {"constraint-descent", "steer_constraint: tangent descent*"},
      {"projection-residual", "project: success implies*"},
      {"tree-costs-dijkstra", "rrt_star_extend: diamond*,rrt_star_extend: costs on a frozen*"},
      {"goal-set-rho", "psm_star: tree invariants*"},
      {"nearest-oracle", "nearest and near equal*"},
      {"determinism", "planners are deterministic*"},
  };
  if (binary.empty()) {
    v.require(false, "unit test binary not given");
    return v;
  }
  for (const auto& [name, filter] : suites) {
    std::string tally = "?";
    const bool ok = run_suite(binary, filter, tally);
    v.require(ok, name);
    v.detail << " " << name << " " << tally;
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string unit_tests;
  std::vector<std::string> allow_red;
  app.add_option("--unit-tests", unit_tests, "path to psm_unit_tests");
  app.add_option("--allow-red", allow_red, "criteria known to fail; reported but not fatal");
  CLI11_PARSE(app, argc, argv);
  const std::set<std::string> tolerated(allow_red.begin(), allow_red.end());

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"point3d_free", point3d_free},
      {"point3d_obstacles", point3d_obstacles},
      {"variant_ordering", variant_ordering},
      {"sweep_trends", sweep_trends},
      {"plane_cylinder_oracle", plane_cylinder},
      {"transport_a_mini",
       [] { return transport("transport_a_mini", {{}, {{"object", 0}}, {{"object", 0}}}); }},
      {"transport_b_mini",
       [] {
         return transport("transport_b_mini",
                          {{}, {{"object", 0}}, {{"object", 2}}, {{"object", 2}}, {{"object", 1}}});
       }},
      {"property_suites", [&] { return property_suites(unit_tests); }},
  };

  int fatal = 0, failed = 0;
  for (const auto& [name, check] : criteria) {
    const Verdict v = check();
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ":" << v.detail.str();
    if (!v.pass) {
      ++failed;
      if (tolerated.count(name)) {
        std::cout << " (known red)";
      } else {
        ++fatal;
      }
    }
    std::cout << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria pass";
  if (failed > fatal) std::cout << ", " << failed - fatal << " known red";
  std::cout << std::endl;
  return fatal == 0 ? 0 : 1;
}
