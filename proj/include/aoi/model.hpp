#pragma once

#include <optional>

namespace aoi {

// Rates of the two-stream system: ordinary stream (FCFS, resumed after
// preemption) and priority stream (preemptive, replaces itself).
//
// lambda2 may be zero, which reduces the ordinary stream to M/M/1 FCFS.
// Every other rate must be strictly positive and finite.
class ModelParams {
 public:
  ModelParams(double lambda1, double lambda2, double mu1, double mu2);

  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double mu1() const { return mu1_; }
  double mu2() const { return mu2_; }

  double lambda() const { return lambda1_ + lambda2_; }
  double p1() const { return lambda1_ / lambda(); }
  double p2() const { return lambda2_ / lambda(); }

  ModelParams with_lambda1(double v) const { return {v, lambda2_, mu1_, mu2_}; }
  ModelParams with_lambda2(double v) const { return {lambda1_, v, mu1_, mu2_}; }
  ModelParams with_mu1(double v) const { return {lambda1_, lambda2_, v, mu2_}; }
  ModelParams with_mu2(double v) const { return {lambda1_, lambda2_, mu1_, v}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double lambda1_;
  double lambda2_;
  double mu1_;
  double mu2_;
};

struct StabilityReport {
  double margin = 0.0;  // mu1 - lambda1 (1 + lambda2 / mu2)
  bool is_stable = false;
  std::optional<double> pi0;  // idle probability, only when stable
};

StabilityReport check_stability(const ModelParams& params);

// Relative margin below which closed forms refuse to evaluate.
inline constexpr double kNearBoundaryTolerance = 1e-9;

// Throws UnstableSystem when margin <= 0, NearBoundary when the margin is
// positive but below kNearBoundaryTolerance * mu1.
void require_stable(const ModelParams& params);

}  // namespace aoi
