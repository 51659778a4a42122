#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/simulator.hpp"

namespace aoi {

enum class SweptRate { kLambda1, kLambda2, kMu1, kMu2 };

// Accepts l1/l2/m1/m2 and lambda1/lambda2/mu1/mu2.
SweptRate parse_swept_rate(std::string_view name);
std::string_view to_string(SweptRate rate);
ModelParams with_rate(const ModelParams& base, SweptRate rate, double value);

struct SweepSpec {
  ModelParams base{2.0, 5.0, 10.0, 5.0};  // the swept rate is overwritten per point
  SweptRate swept = SweptRate::kLambda2;
  double from = 0.5;
  double to = 19.0;
  std::size_t points = 38;
  sim::SimConfig sim;  // seed is the base seed; each point gets mix_seed(seed, index)
  bool simulate = true;
  std::size_t threads = 1;
};

// Linear grid; throws InvalidConfig unless strictly increasing (or a single
// point with from == to) and InvalidRate if a point is not a valid rate.
std::vector<double> sweep_grid(const SweepSpec& spec);

struct SweepRow {
  double swept_value = 0.0;
  double margin = 0.0;
  bool stable = false;
  std::optional<double> pi0;
  std::optional<double> e_n;
  std::optional<double> peak_age_1;
  std::optional<double> age_lb_1;
  std::optional<double> age_u2;
  std::optional<double> age_ref;
  std::optional<double> sim_age_1;
  std::optional<double> sim_peak_1;
  std::optional<double> sim_age_2;
  std::optional<double> sim_e_n;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> deliveries;
  // Not written to CSV.
  std::optional<double> sim_age_1_stderr;
  std::optional<double> sim_peak_1_stderr;
};

// Rows come back in grid order whatever the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::array<std::string_view, 15> kSweepColumns = {
    "swept_value", "margin",    "pi0",        "e_n",       "peak_age_1",
    "age_lb_1",    "age_u2",    "age_ref",    "sim_age_1", "sim_peak_1",
    "sim_age_2",   "sim_e_n",   "seed",       "deliveries", "stable"};

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace aoi
