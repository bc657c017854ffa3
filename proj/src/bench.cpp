#include "psm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "psm/io.hpp"

namespace psm::bench {

namespace {

std::string fmt(double v) { return io::format_double(v); }

io::Json record_json(const RunRecord& r) {
  io::Json j = {{"scene", r.scene},
                {"planner", r.planner},
                {"seed", r.seed},
                {"success", r.success},
                {"path_length", r.path_length ? io::Json(*r.path_length) : io::Json(nullptr)}};
  io::Json p = io::params_to_json(r.params);
  p.erase("seed");
  j["params"] = p;
  return j;
}

io::Json summary_json(const Summary& s) {
  return {{"scene", s.scene},
          {"planner", s.planner},
          {"runs", s.runs},
          {"successes", s.successes},
          {"mean", std::isfinite(s.mean) ? io::Json(s.mean) : io::Json(nullptr)},
          {"std", s.std}};
}

}  // namespace

RunOutput run(const Scene& scene, PlannerKind planner, PlannerParams params, std::uint64_t seed) {
  params.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult result = plan(planner, scene, params);
  const auto t1 = std::chrono::steady_clock::now();

  RunOutput out;
  out.record.scene = scene.name;
  out.record.planner = planner_id(planner);
  out.record.seed = seed;
  out.record.success = result.success();
  out.record.wall_time = std::chrono::duration<double>(t1 - t0).count();
  out.record.params = params;
  if (result.path) {
    out.record.path_length = result.path->total_cost;
    out.path = std::move(result.path);
  }
  return out;
}

std::vector<RunOutput> run_batch(const Scene& scene, PlannerKind planner, const PlannerParams& params,
                                 const std::vector<std::uint64_t>& seeds, int threads) {
  std::vector<RunOutput> out(seeds.size());
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(seeds.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) out[i] = run(scene, planner, params, seeds[i]);
  };
  if (threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < count; ++i) s.push_back(first + static_cast<std::uint64_t>(i));
  return s;
}

std::vector<Summary> aggregate(const std::vector<RunRecord>& records) {
  std::vector<Summary> out;
  std::vector<std::vector<double>> lengths;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Summary& s) { return s.scene == r.scene && s.planner == r.planner; });
    if (it == out.end()) {
      out.push_back({r.scene, r.planner, 0, 0, 0.0, 0.0});
      lengths.emplace_back();
      it = out.end() - 1;
    }
    auto& bucket = lengths[static_cast<std::size_t>(it - out.begin())];
    ++it->runs;
    if (r.success && r.path_length) {
      ++it->successes;
      bucket.push_back(*r.path_length);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = lengths[i];
    if (v.empty()) {
      out[i].mean = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out[i].mean = mean;
    out[i].std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  return out;
}

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep: no values given");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw std::invalid_argument("sweep: values must be strictly increasing");
  if (seeds_per_value < 1) throw std::invalid_argument("sweep: seeds per value must be >= 1");
  if (parameter == SweepParameter::M)
    for (double v : values)
      if (v < 1 || v != std::floor(v)) throw std::invalid_argument("sweep: m values must be positive integers");
}

std::optional<SweepParameter> parse_sweep_parameter(const std::string& name) {
  if (name == "rho") return SweepParameter::Rho;
  if (name == "m") return SweepParameter::M;
  return std::nullopt;
}

std::string sweep_parameter_name(SweepParameter p) { return p == SweepParameter::Rho ? "rho" : "m"; }

PlannerParams with_value(PlannerParams params, SweepParameter p, double value) {
  if (p == SweepParameter::Rho)
    params.rho = value;
  else
    params.m = static_cast<int>(value);
  return params;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, const Scene& scene, PlannerKind planner,
                            const PlannerParams& params, int threads) {
  spec.validate();
  std::vector<SweepRow> rows;
  const auto seeds = seed_range(spec.first_seed, spec.seeds_per_value);
  for (double v : spec.values) {
    SweepRow row;
    row.value = v;
    for (auto& o : run_batch(scene, planner, with_value(params, spec.parameter, v), seeds, threads))
      row.records.push_back(std::move(o.record));
    row.summary = aggregate(row.records).front();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "scene,planner,seed,success,path_length,alpha,beta,eps,rho,r,m,gamma_rrt\n";
  for (const auto& r : records) {
    const auto& p = r.params;
    os << r.scene << ',' << r.planner << ',' << r.seed << ',' << (r.success ? 1 : 0) << ','
       << (r.path_length ? fmt(*r.path_length) : "") << ',' << fmt(p.alpha) << ',' << fmt(p.beta) << ','
       << fmt(p.eps) << ',' << fmt(p.rho) << ',' << fmt(p.r) << ',' << p.m << ',' << fmt(p.gamma_rrt) << '\n';
  }
}

void write_records_jsonl(std::ostream& os, const std::vector<RunRecord>& records) {
  for (const auto& r : records) os << record_json(r).dump() << '\n';
}

void write_summary_csv(std::ostream& os, const std::vector<Summary>& summaries) {
  os << "scene,planner,runs,successes,mean,std\n";
  for (const auto& s : summaries)
    os << s.scene << ',' << s.planner << ',' << s.runs << ',' << s.successes << ','
       << (std::isfinite(s.mean) ? fmt(s.mean) : "") << ',' << fmt(s.std) << '\n';
}

void write_summary_jsonl(std::ostream& os, const std::vector<Summary>& summaries) {
  for (const auto& s : summaries) os << summary_json(s).dump() << '\n';
}

void write_sweep_csv(std::ostream& os, SweepParameter p, const std::vector<SweepRow>& rows) {
  os << sweep_parameter_name(p) << ",runs,successes,mean,std\n";
  for (const auto& row : rows) {
    const auto& s = row.summary;
    os << fmt(row.value) << ',' << s.runs << ',' << s.successes << ',' << (std::isfinite(s.mean) ? fmt(s.mean) : "")
       << ',' << fmt(s.std) << '\n';
  }
}

void write_sweep_jsonl(std::ostream& os, SweepParameter p, const std::vector<SweepRow>& rows) {
  for (const auto& row : rows) {
    io::Json j = summary_json(row.summary);
    j[sweep_parameter_name(p)] = row.value;
    os << j.dump() << '\n';
  }
}

void write_timing_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "scene,planner,seed,wall_time\n";
  for (const auto& r : records) os << r.scene << ',' << r.planner << ',' << r.seed << ',' << fmt(r.wall_time) << '\n';
}

std::string path_file_name(const RunRecord& r) {
  return r.scene + "_" + r.planner + "_seed" + std::to_string(r.seed) + "_path.csv";
}

}  // namespace psm::bench
