#include "aoi/model.hpp"

#include <cmath>
#include <string>

#include "aoi/errors.hpp"

namespace aoi {
namespace {

void check_rate(double value, const char* name, bool allow_zero) {
  const bool ok = std::isfinite(value) && (allow_zero ? value >= 0.0 : value > 0.0);
  if (!ok) {
    throw Error(ErrorCode::kInvalidRate,
                std::string(name) + " must be " + (allow_zero ? "non-negative" : "positive") +
                    " and finite, got " + std::to_string(value));
  }
}

}  // namespace

ModelParams::ModelParams(double lambda1, double lambda2, double mu1, double mu2)
    : lambda1_(lambda1), lambda2_(lambda2), mu1_(mu1), mu2_(mu2) {
  check_rate(lambda1, "lambda1", false);
  check_rate(lambda2, "lambda2", true);
  check_rate(mu1, "mu1", false);
  check_rate(mu2, "mu2", false);
}

StabilityReport check_stability(const ModelParams& params) {
  StabilityReport report;
  report.margin = params.mu1() - params.lambda1() * (1.0 + params.lambda2() / params.mu2());
  report.is_stable = report.margin > 0.0;
  if (report.is_stable) {
    report.pi0 = params.mu2() / (params.mu2() + params.lambda2()) - params.lambda1() / params.mu1();
  }
  return report;
}

void require_stable(const ModelParams& params) {
  const double margin = check_stability(params).margin;
  if (!(margin > 0.0)) {
    throw Error(ErrorCode::kUnstableSystem,
                "stability margin " + std::to_string(margin) + " is not positive");
  }
  if (margin / params.mu1() < kNearBoundaryTolerance) {
    throw Error(ErrorCode::kNearBoundary,
                "stability margin " + std::to_string(margin) + " too close to the boundary");
  }
}

}  // namespace aoi
