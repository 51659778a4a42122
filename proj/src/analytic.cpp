#include "aoi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aoi/errors.hpp"

namespace aoi {

std::pair<double, double> real_quadratic_roots(double b, double c) {
  double disc = b * b - 4.0 * c;
  if (disc < 0.0) {
    // Double roots may come out a few ulps negative.
    if (disc > -1e-14 * b * b) {
      disc = 0.0;
    } else {
      throw Error(ErrorCode::kOutOfDomain, "quadratic has complex roots");
    }
  }
  const double sign = b >= 0.0 ? 1.0 : -1.0;
  const double q = -0.5 * (b + sign * std::sqrt(disc));
  if (q == 0.0) return {0.0, 0.0};
  double r1 = q;
  double r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

double SpectralDecomposition::characteristic(double l) const {
  return l * l - l * (ratio(1) + ratio(5) - 1.0) + ratio(3) * ratio(5);
}

namespace {

std::array<double, 5> recursion_ratios(const ModelParams& p) {
  const double l1 = p.lambda1(), l2 = p.lambda2(), m1 = p.mu1(), m2 = p.mu2();
  return {
      1.0 + p.lambda() / m1 - m2 * l2 / (m1 * (m2 + l1)),
      m2 * l1 / (m1 * (m2 + l1)),
      l1 / m1,
      l2 / (m2 + l1),
      l1 / (m2 + l1),
  };
}

Eigen::Vector4d eigenvector(double l, const std::array<double, 5>& r) {
  return {l * (l - r[4]), l * r[3], l - r[4], r[3]};
}

double sum_ladder(const std::vector<LadderEntry>& ladder) {
  // Smallest terms first.
  double total = 0.0;
  for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) total += it->ordinary + it->priority;
  return total;
}

void require_levels(std::size_t i_max) {
  if (i_max < 1) throw Error(ErrorCode::kInvalidConfig, "ladder length must be at least 1");
}

}  // namespace

SpectralDecomposition spectral(const ModelParams& params) {
  require_stable(params);
  SpectralDecomposition sd;
  sd.ratios = recursion_ratios(params);
  const auto& r = sd.ratios;
  const auto [small, large] = real_quadratic_roots(-(r[0] + r[4] - 1.0), r[2] * r[4]);
  sd.eig_small = small;
  sd.eig_large = large;
  sd.vec_small = eigenvector(small, r);
  sd.vec_large = eigenvector(large, r);
  sd.mix = large > small ? 1.0 / (large - small) : std::numeric_limits<double>::infinity();
  return sd;
}

Eigen::Matrix4d level_transfer_matrix(const ModelParams& params) {
  const auto r = recursion_ratios(params);
  Eigen::Matrix4d h;
  h << r[0], -r[1], -r[2], 0.0,
       r[3], r[4], 0.0, 0.0,
       1.0, 0.0, 0.0, 0.0,
       0.0, 1.0, 0.0, 0.0;
  return h;
}

std::size_t default_ladder_length(const ModelParams& params) {
  const double pi0 = *check_stability(params).pi0;
  const SpectralDecomposition sd = spectral(params);
  const double l1 = sd.eig_small, l2 = sd.eig_large;
  const double floor_levels = std::ceil(std::log(1e-10 / pi0) / std::log(l2));
  std::size_t n = static_cast<std::size_t>(std::clamp(floor_levels, 8.0, 1e5));
  if (!(l2 - l1 > 1e-9 * l2)) {
    // Mass per level behaves like i l^i; bound the tail by l^n / (1 - l)^2.
    const double extended = std::ceil(std::log(1e-10 * (1.0 - l2) * (1.0 - l2)) / std::log(l2));
    return static_cast<std::size_t>(std::clamp(std::max(floor_levels, extended), 8.0, 1e5));
  }
  // Closed-form mass beyond level n; extend the ladder until it drops below 1e-10.
  const double r4 = sd.ratio(4), r5 = sd.ratio(5);
  const double w1 = l1 - r5 + r4, w2 = l2 - r5 + r4;
  const auto tail = [&](double levels) {
    return sd.mix * pi0 *
           (w2 * std::pow(l2, levels + 1.0) / (1.0 - l2) - w1 * std::pow(l1, levels + 1.0) / (1.0 - l1));
  };
  while (n < 100'000 && std::abs(tail(static_cast<double>(n))) > 1e-10) n = std::min<std::size_t>(n + n / 4 + 1, 100'000);
  return n;
}

StationaryDistribution stationary(const ModelParams& params, std::size_t i_max) {
  require_levels(i_max);
  const SpectralDecomposition sd = spectral(params);
  if (!(sd.eig_large - sd.eig_small > 1e-9 * sd.eig_large)) {
    return stationary_by_recursion(params, i_max);
  }
  StationaryDistribution dist;
  dist.pi0 = *check_stability(params).pi0;
  dist.ladder.resize(i_max);
  const double r4 = sd.ratio(4), r5 = sd.ratio(5);
  const double scale = sd.mix * dist.pi0;
  double pow_small = 1.0, pow_large = 1.0;
  for (std::size_t k = 0; k < i_max; ++k) {
    pow_small *= sd.eig_small;
    pow_large *= sd.eig_large;
    dist.ladder[k].ordinary =
        scale * (pow_large * (sd.eig_large - r5) - pow_small * (sd.eig_small - r5));
    dist.ladder[k].priority = scale * r4 * (pow_large - pow_small);
  }
  dist.tail_mass = 1.0 - dist.pi0 - sum_ladder(dist.ladder);
  return dist;
}

StationaryDistribution stationary(const ModelParams& params) {
  return stationary(params, default_ladder_length(params));
}

StationaryDistribution stationary_by_recursion(const ModelParams& params, std::size_t i_max) {
  require_levels(i_max);
  require_stable(params);
  StationaryDistribution dist;
  dist.pi0 = *check_stability(params).pi0;
  const auto r = recursion_ratios(params);
  const Eigen::Matrix4d h = level_transfer_matrix(params);
  Eigen::Vector4d a(r[0] - 1.0, r[3], 1.0, 0.0);
  a *= dist.pi0;
  dist.ladder.resize(i_max);
  for (std::size_t k = 0; k < i_max; ++k) {
    a = h * a;
    dist.ladder[k] = {a[2], a[3]};
  }
  dist.tail_mass = 1.0 - dist.pi0 - sum_ladder(dist.ladder);
  return dist;
}

double queue_length_mgf_bound(const ModelParams& params) {
  require_stable(params);
  const double l1 = params.lambda1();
  // lambda1^2 x^2 - lambda1 (lambda1 + lambda2 + mu1 + mu2) x + mu1 (mu2 + lambda1), x = e^s
  const double b = -(l1 + params.lambda2() + params.mu1() + params.mu2()) / l1;
  const double c = params.mu1() * (params.mu2() + l1) / (l1 * l1);
  return std::log(real_quadratic_roots(b, c).first);
}

double queue_length_mgf(const ModelParams& params, double s) {
  const double bound = queue_length_mgf_bound(params);
  if (!(s < bound)) {
    throw Error(ErrorCode::kOutOfDomain,
                "s = " + std::to_string(s) + " outside the MGF strip s < " + std::to_string(bound));
  }
  const double l1 = params.lambda1(), l2 = params.lambda2(), m1 = params.mu1(), m2 = params.mu2();
  const double x = std::exp(s);
  const double pi0 = *check_stability(params).pi0;
  const double num = pi0 * m1 * (l1 + l2 + m2 - l1 * x);
  const double den = m1 * m2 + m1 * l1 - x * (l1 * l1 + l1 * l2 + l1 * m1 + l1 * m2) + l1 * l1 * x * x;
  return num / den;
}

double expected_queue_length(const ModelParams& params) {
  require_stable(params);
  const double l1 = params.lambda1(), l2 = params.lambda2(), m1 = params.mu1(), m2 = params.mu2();
  return l1 * (2.0 * l2 * m2 + l2 * m1 + l2 * l2 + m2 * m2) /
         ((m2 + l2) * (m1 * m2 - l1 * (m2 + l2)));
}

double peak_age_ordinary(const ModelParams& params) {
  // Little's law: E[T] = E[N] / lambda1.
  return (1.0 + expected_queue_length(params)) / params.lambda1();
}

double priority_age(const ModelParams& params) {
  if (!(params.lambda2() > 0.0)) {
    throw Error(ErrorCode::kInvalidRate, "priority age needs lambda2 > 0");
  }
  return 1.0 / params.mu2() + 1.0 / params.lambda2();
}

double reference_mm1_age(double lambda1, double mu1) {
  if (!(lambda1 > 0.0 && mu1 > 0.0 && std::isfinite(lambda1) && std::isfinite(mu1))) {
    throw Error(ErrorCode::kInvalidRate, "M/M/1 rates must be positive and finite");
  }
  if (lambda1 >= mu1) {
    throw Error(ErrorCode::kUnstableSystem, "M/M/1 reference needs lambda1 < mu1");
  }
  const double rho = lambda1 / mu1;
  return (1.0 + 1.0 / rho + rho * rho / (1.0 - rho)) / mu1;
}

}  // namespace aoi
