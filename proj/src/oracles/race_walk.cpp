#include <cmath>
#include <vector>

#include "aoi/oracles.hpp"

namespace aoi::oracle {

double sample_head_of_line(const ModelParams& params, bool blocked, ExponentialSource& rng) {
  const double l2 = params.lambda2();
  double elapsed = 0.0;
  bool ordinary_in_service = !blocked;
  for (;;) {
    const double service = rng.draw(ordinary_in_service ? params.mu1() : params.mu2());
    const double next_priority = l2 > 0.0 ? rng.draw(l2) : INFINITY;
    if (service < next_priority) {
      elapsed += service;
      if (ordinary_in_service) return elapsed;
      ordinary_in_service = true;
    } else {
      elapsed += next_priority;
      ordinary_in_service = false;
    }
  }
}

Estimate detour_walk(const RaceProbabilities& p, const DetourMarks& d, bool blocked,
                     std::uint64_t walks, std::uint64_t seed) {
  ExponentialSource rng(seed);
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t w = 0; w < walks; ++w) {
    double weight = 1.0;
    bool at_ordinary = !blocked;
    for (;;) {
      const double u = rng.uniform();
      if (at_ordinary) {
        if (u < p.ordinary_completes) {
          weight *= d.ordinary_completes;
          break;
        }
        weight *= d.ordinary_preempted;
        at_ordinary = false;
      } else if (u < p.priority_completes) {
        weight *= d.priority_completes;
        at_ordinary = true;
      } else {
        weight *= d.priority_replaced;
      }
    }
    sum += weight;
    sq += weight * weight;
  }
  const auto n = static_cast<double>(walks);
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sq / n - mean * mean) / n)};
}

}  // namespace aoi::oracle

namespace aoi::oracle {

std::vector<ModelParams> random_stable_points(std::size_t count, std::uint64_t seed) {
  ExponentialSource rng(seed);
  const auto draw = [&rng] { return 0.1 * std::pow(200.0, rng.uniform()); };
  std::vector<ModelParams> points;
  while (points.size() < count) {
    const ModelParams p(draw(), draw(), draw(), draw());
    const double margin = p.mu1() - p.lambda1() * (1.0 + p.lambda2() / p.mu2());
    if (margin > 0.0) points.push_back(p);
  }
  return points;
}

}  // namespace aoi::oracle
