#pragma once

// Independent cross-check routes. Nothing here calls the closed forms of
// analytic.hpp / age_analysis.hpp; each oracle works from the raw rates or
// from an explicitly supplied density.

#include <cstdint>
#include <functional>
#include <vector>

#include "aoi/age_analysis.hpp"
#include "aoi/model.hpp"
#include "aoi/rng.hpp"

namespace aoi::oracle {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Head-of-line time of one ordinary packet, built by racing raw exponential
// clocks: service vs. next priority arrival while the ordinary packet is
// served, priority service vs. next priority arrival while a priority packet
// is served. `blocked` starts the walk with a priority packet in service.
double sample_head_of_line(const ModelParams& params, bool blocked, ExponentialSource& rng);

// Monte Carlo mean of the product of edge marks along random walks on the
// detour graph, edges chosen with the race probabilities.
Estimate detour_walk(const RaceProbabilities& probs, const DetourMarks& marks, bool blocked,
                     std::uint64_t walks, std::uint64_t seed);

struct LindleyEstimate {
  Estimate overlap;      // E[X_j (T_{j-1} - X_j)^+]
  Estimate system_time;  // E[T]
};

// Runs T_j = (T_{j-1} - X_j)^+ + Y_j with X ~ Exp(lambda1) and Y from
// sample_head_of_line(blocked = false); batch-means standard errors.
LindleyEstimate lindley_overlap(const ModelParams& params, std::uint64_t samples,
                                std::uint64_t seed, std::uint64_t burn_in = 10'000);

// Nested numerical integral of x (t - x) f(t) lambda1 e^{-lambda1 x} over
// 0 <= x <= t < infinity.
double overlap_by_quadrature(const std::function<double(double)>& density, double lambda1);

// Integral of g over [0, infinity).
double integrate_half_line(const std::function<double(double)>& g);

// Log-uniform rates in [0.1, 20], rejection-filtered to stable points.
std::vector<ModelParams> random_stable_points(std::size_t count, std::uint64_t seed);

}  // namespace aoi::oracle
