#include "aoi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <string>
#include <thread>

#include "aoi/errors.hpp"
#include "aoi/report.hpp"
#include "aoi/rng.hpp"

namespace aoi {

SweptRate parse_swept_rate(std::string_view name) {
  if (name == "l1" || name == "lambda1") return SweptRate::kLambda1;
  if (name == "l2" || name == "lambda2") return SweptRate::kLambda2;
  if (name == "m1" || name == "mu1") return SweptRate::kMu1;
  if (name == "m2" || name == "mu2") return SweptRate::kMu2;
  throw Error(ErrorCode::kInvalidConfig, "unknown swept parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweptRate rate) {
  switch (rate) {
    case SweptRate::kLambda1: return "l1";
    case SweptRate::kLambda2: return "l2";
    case SweptRate::kMu1: return "m1";
    case SweptRate::kMu2: return "m2";
  }
  return "?";
}

ModelParams with_rate(const ModelParams& base, SweptRate rate, double value) {
  switch (rate) {
    case SweptRate::kLambda1: return base.with_lambda1(value);
    case SweptRate::kLambda2: return base.with_lambda2(value);
    case SweptRate::kMu1: return base.with_mu1(value);
    case SweptRate::kMu2: return base.with_mu2(value);
  }
  return base;
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  if (spec.points < 1) throw Error(ErrorCode::kInvalidConfig, "sweep needs at least one point");
  if (spec.points == 1 ? spec.from != spec.to : !(spec.to > spec.from)) {
    throw Error(ErrorCode::kInvalidConfig, "sweep grid must be strictly increasing");
  }
  std::vector<double> grid(spec.points);
  const double step = spec.points > 1 ? (spec.to - spec.from) / static_cast<double>(spec.points - 1) : 0.0;
  for (std::size_t i = 0; i < spec.points; ++i) {
    grid[i] = i + 1 == spec.points ? spec.to : spec.from + step * static_cast<double>(i);
    with_rate(spec.base, spec.swept, grid[i]);  // validates
  }
  return grid;
}

namespace {

SweepRow evaluate_point(const SweepSpec& spec, double value, std::size_t index) {
  const ModelParams params = with_rate(spec.base, spec.swept, value);
  const AnalysisReport analysis = analyze(params);
  SweepRow row;
  row.swept_value = value;
  row.margin = analysis.stability.margin;
  row.stable = analysis.ok();
  row.age_u2 = analysis.age_u2;
  row.age_ref = analysis.age_ref;
  if (!row.stable) return row;
  row.pi0 = analysis.pi0;
  row.e_n = analysis.expected_queue_length;
  row.peak_age_1 = analysis.peak_age_1;
  row.age_lb_1 = analysis.age_lb_1;
  if (spec.simulate) {
    sim::SimConfig config = spec.sim;
    config.seed = mix_seed(spec.sim.seed, index);
    const sim::SimResult result = sim::run(params, config);
    row.sim_age_1 = result.avg_age_1;
    row.sim_peak_1 = result.avg_peak_1;
    row.sim_age_2 = result.avg_age_2;
    row.sim_e_n = result.time_avg_n;
    row.seed = config.seed;
    row.deliveries = result.deliveries_observed;
    row.sim_age_1_stderr = result.age_1_stderr;
    row.sim_peak_1_stderr = result.peak_1_stderr;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const std::vector<double> grid = sweep_grid(spec);
  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) rows[i] = evaluate_point(spec, grid[i], i);
  };
  const std::size_t threads = std::clamp<std::size_t>(spec.threads, 1, grid.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (std::size_t c = 0; c < kSweepColumns.size(); ++c) out << (c ? "," : "") << kSweepColumns[c];
  out << '\n';
  const auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  const auto count = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const SweepRow& r : rows) {
    out << format_double(r.swept_value) << ',' << format_double(r.margin) << ',' << cell(r.pi0) << ','
        << cell(r.e_n) << ',' << cell(r.peak_age_1) << ',' << cell(r.age_lb_1) << ',' << cell(r.age_u2)
        << ',' << cell(r.age_ref) << ',' << cell(r.sim_age_1) << ',' << cell(r.sim_peak_1) << ','
        << cell(r.sim_age_2) << ',' << cell(r.sim_e_n) << ',' << count(r.seed) << ','
        << count(r.deliveries) << ',' << (r.stable ? "true" : "false") << '\n';
  }
}

}  // namespace aoi
