#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psm/planner.hpp"
#include "psm/scene.hpp"

namespace psm::bench {

struct RunRecord {
  std::string scene;
  std::string planner;
  std::uint64_t seed = 0;
  bool success = false;
  std::optional<double> path_length;  // present iff success
  double wall_time = 0.0;             // seconds
  PlannerParams params;
};

struct RunOutput {
  RunRecord record;
  std::optional<SolutionPath> path;
};

RunOutput run(const Scene& scene, PlannerKind planner, PlannerParams params, std::uint64_t seed);

// Runs every seed on a worker pool; output is ordered as `seeds`.
// threads <= 0 uses the hardware concurrency.
std::vector<RunOutput> run_batch(const Scene& scene, PlannerKind planner, const PlannerParams& params,
                                 const std::vector<std::uint64_t>& seeds, int threads = 0);

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count);

struct Summary {
  std::string scene;
  std::string planner;
  int runs = 0;
  int successes = 0;
  double mean = 0.0;  // over successful runs; NaN without any
  double std = 0.0;   // sample standard deviation; 0 for a single success
};

// One summary per (scene, planner), in order of first appearance.
std::vector<Summary> aggregate(const std::vector<RunRecord>& records);

enum class SweepParameter { Rho, M };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Rho;
  std::vector<double> values;  // strictly increasing
  int seeds_per_value = 10;
  std::uint64_t first_seed = 0;

  void validate() const;
};

std::optional<SweepParameter> parse_sweep_parameter(const std::string& name);
std::string sweep_parameter_name(SweepParameter p);
PlannerParams with_value(PlannerParams params, SweepParameter p, double value);

struct SweepRow {
  double value = 0.0;
  Summary summary;
  std::vector<RunRecord> records;
};

std::vector<SweepRow> sweep(const SweepSpec& spec, const Scene& scene, PlannerKind planner,
                            const PlannerParams& params, int threads = 0);

// Result tables. None of these contain wall time, so reruns are byte-identical.
void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records);
void write_records_jsonl(std::ostream& os, const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<Summary>& summaries);
void write_summary_jsonl(std::ostream& os, const std::vector<Summary>& summaries);
void write_sweep_csv(std::ostream& os, SweepParameter p, const std::vector<SweepRow>& rows);
void write_sweep_jsonl(std::ostream& os, SweepParameter p, const std::vector<SweepRow>& rows);
void write_timing_csv(std::ostream& os, const std::vector<RunRecord>& records);

std::string path_file_name(const RunRecord& record);

}  // namespace psm::bench
