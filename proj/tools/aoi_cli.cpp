#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "aoi/errors.hpp"
#include "aoi/model.hpp"
#include "aoi/report.hpp"
#include "aoi/simulator.hpp"
#include "aoi/sweep.hpp"
#include "aoi/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitInvalid = 2;

struct Options {
  double l1 = 2.0;
  double l2 = 5.0;
  double m1 = 10.0;
  double m2 = 5.0;
  std::string sweep = "l2";
  double from = 0.5;
  double to = 19.0;
  std::size_t points = 38;
  std::uint64_t seed = 1;
  std::uint64_t deliveries = 1'000'000;
  std::uint64_t warmup = 1'000;
  std::string mode = "true";
  bool no_sim = false;
  std::string format;
  std::string out;
  std::string trace;
  bool quick = false;
  std::size_t threads = 1;
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw aoi::Error(aoi::ErrorCode::kInvalidConfig, "cannot open " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

aoi::ModelParams params_of(const Options& o) { return aoi::ModelParams{o.l1, o.l2, o.m1, o.m2}; }

aoi::sim::SimConfig sim_config_of(const Options& o) {
  aoi::sim::SimConfig c;
  c.seed = o.seed;
  c.target_deliveries = o.deliveries;
  c.warmup_deliveries = o.warmup;
  c.mode = o.mode == "fictitious" ? aoi::sim::Mode::kFictitiousSystem : aoi::sim::Mode::kTrueSystem;
  c.record_trace = !o.trace.empty();
  return c;
}

int cmd_analyze(const Options& o) {
  const aoi::AnalysisReport report = aoi::analyze(params_of(o));
  Output out(o.out);
  if (o.format == "json") {
    out.stream() << aoi::to_json(report).dump(2) << '\n';
  } else {
    aoi::write_text(out.stream(), report);
  }
  return report.ok() ? kExitOk : kExitInvalid;
}

int cmd_sweep(const Options& o) {
  aoi::SweepSpec spec;
  spec.base = params_of(o);
  spec.swept = aoi::parse_swept_rate(o.sweep);
  spec.from = o.from;
  spec.to = o.to;
  spec.points = o.points;
  spec.sim = sim_config_of(o);
  spec.sim.record_trace = false;
  spec.simulate = !o.no_sim;
  spec.threads = o.threads;
  const auto rows = aoi::run_sweep(spec);
  Output out(o.out);
  aoi::write_csv(out.stream(), rows);
  return kExitOk;
}

nlohmann::json to_json(const aoi::sim::SimResult& r, const aoi::sim::SimConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["mode"] = c.mode == aoi::sim::Mode::kFictitiousSystem ? "fictitious" : "true";
  j["deliveries"] = r.deliveries_observed;
  j["priority_deliveries"] = r.priority_deliveries;
  j["sim_time"] = r.sim_time;
  j["avg_age_1"] = r.avg_age_1;
  j["age_1_stderr"] = r.age_1_stderr;
  j["avg_peak_1"] = r.avg_peak_1;
  j["peak_1_stderr"] = r.peak_1_stderr;
  j["avg_age_2"] = r.avg_age_2;
  j["time_avg_n"] = r.time_avg_n;
  j["mean_system_time_1"] = r.mean_system_time_1;
  j["z_mean"] = r.z_mean;
  j["z_m2"] = r.z_m2;
  j["blocked_fraction"] = r.blocked_fraction;
  j["occupancy_ordinary"] = r.occupancy_ordinary;
  j["occupancy_priority"] = r.occupancy_priority;
  j["races"] = {{"ordinary_completed", r.races.ordinary_completed},
                {"ordinary_preempted", r.races.ordinary_preempted},
                {"priority_completed", r.races.priority_completed},
                {"priority_replaced", r.races.priority_replaced}};
  return j;
}

int cmd_simulate(const Options& o) {
  const aoi::ModelParams params = params_of(o);
  aoi::require_stable(params);
  const aoi::sim::SimConfig config = sim_config_of(o);
  const aoi::sim::SimResult result = aoi::sim::run(params, config);
  if (!o.trace.empty()) {
    std::ofstream trace(o.trace);
    if (!trace) throw aoi::Error(aoi::ErrorCode::kInvalidConfig, "cannot open " + o.trace);
    aoi::sim::write_event_log(trace, result.trace);
  }
  Output out(o.out);
  out.stream() << to_json(result, config).dump(2) << '\n';
  return kExitOk;
}

int cmd_validate(const Options& o, bool seed_given) {
  aoi::ValidationOptions v;
  v.quick = o.quick;
  v.threads = o.threads;
  if (seed_given) v.seed = o.seed;
  Output out(o.out);
  std::size_t failed = 0, total = 0;
  aoi::run_validation(v, [&](const aoi::CheckResult& c) {
    aoi::print_check(out.stream(), c);
    out.stream().flush();
    ++total;
    if (!c.passed) ++failed;
  });
  out.stream() << (total - failed) << "/" << total << " checks passed\n";
  return failed == 0 ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age of information for a two-stream queue with a preemptive priority stream"};
  app.require_subcommand(1);
  app.set_config("--config", "", "File of key = value pairs mirroring the flags; flags win");

  Options o;
  app.add_option("--l1", o.l1, "Ordinary arrival rate")->capture_default_str();
  app.add_option("--l2", o.l2, "Priority arrival rate")->capture_default_str();
  app.add_option("--m1", o.m1, "Ordinary service rate")->capture_default_str();
  app.add_option("--m2", o.m2, "Priority service rate")->capture_default_str();
  app.add_option("--sweep", o.sweep, "Swept rate: l1, l2, m1 or m2")->capture_default_str();
  app.add_option("--from", o.from, "First grid value")->capture_default_str();
  app.add_option("--to", o.to, "Last grid value")->capture_default_str();
  app.add_option("--points", o.points, "Number of grid points")->capture_default_str();
  auto* seed = app.add_option("--seed", o.seed, "Base RNG seed")->capture_default_str();
  app.add_option("--deliveries", o.deliveries, "Measured ordinary deliveries per run")->capture_default_str();
  app.add_option("--warmup", o.warmup, "Deliveries discarded before measuring")->capture_default_str();
  app.add_option("--mode", o.mode, "Simulated system")
      ->check(CLI::IsMember({"true", "fictitious"}))
      ->capture_default_str();
  app.add_flag("--no-sim", o.no_sim, "Sweep without simulation columns");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--out", o.out, "Output path (default stdout)");
  app.add_option("--trace", o.trace, "simulate: write the event log to this path");
  app.add_flag("--quick", o.quick, "validate: 1e5 deliveries per run instead of 1e6");
  app.add_option("--threads", o.threads, "Worker threads for sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Closed-form report for one parameter point")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "CSV over a linear grid of one rate")->fallthrough();
  auto* simulate = app.add_subcommand("simulate", "One simulation run, JSON summary")->fallthrough();
  auto* validate = app.add_subcommand("validate", "Run the acceptance suite")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*analyze) return cmd_analyze(o);
    if (*sweep) return cmd_sweep(o);
    if (*simulate) return cmd_simulate(o);
    if (*validate) return cmd_validate(o, seed->count() > 0);
  } catch (const aoi::Error& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
