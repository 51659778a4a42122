#include <algorithm>
#include <cmath>
#include <vector>

#include "aoi/oracles.hpp"

namespace aoi::oracle {
namespace {

Estimate batch_mean(const std::vector<double>& batches) {
  const auto n = static_cast<double>(batches.size());
  double mean = 0.0;
  for (double b : batches) mean += b;
  mean /= n;
  double ss = 0.0;
  for (double b : batches) ss += (b - mean) * (b - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

LindleyEstimate lindley_overlap(const ModelParams& params, std::uint64_t samples,
                                std::uint64_t seed, std::uint64_t burn_in) {
  constexpr std::uint64_t kBatches = 50;
  ExponentialSource arrivals(mix_seed(seed, 0));
  ExponentialSource service(mix_seed(seed, 1));
  double system_time = 0.0;
  for (std::uint64_t j = 0; j < burn_in; ++j) {
    const double x = arrivals.draw(params.lambda1());
    system_time = std::max(system_time - x, 0.0) + sample_head_of_line(params, false, service);
  }
  const std::uint64_t per_batch = std::max<std::uint64_t>(1, samples / kBatches);
  std::vector<double> overlap_batches, time_batches;
  double overlap_acc = 0.0, time_acc = 0.0;
  for (std::uint64_t j = 1; j <= per_batch * kBatches; ++j) {
    const double x = arrivals.draw(params.lambda1());
    overlap_acc += x * std::max(system_time - x, 0.0);
    system_time = std::max(system_time - x, 0.0) + sample_head_of_line(params, false, service);
    time_acc += system_time;
    if (j % per_batch == 0) {
      overlap_batches.push_back(overlap_acc / static_cast<double>(per_batch));
      time_batches.push_back(time_acc / static_cast<double>(per_batch));
      overlap_acc = time_acc = 0.0;
    }
  }
  return {batch_mean(overlap_batches), batch_mean(time_batches)};
}

}  // namespace aoi::oracle
