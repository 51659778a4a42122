#include "aoi/age_analysis.hpp"

#include <cmath>
#include <string>

#include "aoi/analytic.hpp"
#include "aoi/errors.hpp"

namespace aoi {

RaceProbabilities clock_probabilities(const ModelParams& params) {
  const double l2 = params.lambda2(), m1 = params.mu1(), m2 = params.mu2();
  return {
      .ordinary_completes = m1 / (m1 + l2),
      .priority_replaced = l2 / (m2 + l2),
      .priority_completes = m2 / (m2 + l2),
      .ordinary_preempted = l2 / (m1 + l2),
  };
}

namespace {

double detour_denominator(const RaceProbabilities& p, const DetourMarks& d) {
  const double loop = p.priority_replaced * d.priority_replaced;
  const double cycle =
      p.priority_completes * d.priority_completes * p.ordinary_preempted * d.ordinary_preempted;
  const double den = 1.0 - loop - cycle;
  if (std::abs(den) <= 1e-14 * (1.0 + std::abs(loop) + std::abs(cycle))) {
    throw Error(ErrorCode::kSingularDenominator, "detour graph loop gain reaches one");
  }
  return den;
}

void check_strip(const ModelParams& params, double s) {
  const double bound = head_of_line_mgf_bound(params);
  if (!(s < bound)) {
    throw Error(ErrorCode::kOutOfDomain,
                "s = " + std::to_string(s) + " outside the strip s < " + std::to_string(bound));
  }
}

double head_of_line_denominator(const ModelParams& params, double s) {
  return s * s - s * (params.mu2() + params.mu1() + params.lambda2()) + params.mu1() * params.mu2();
}

DetourMarks clock_mgfs(const ModelParams& params, double s) {
  const double fast1 = params.lambda2() + params.mu1();
  const double fast2 = params.lambda2() + params.mu2();
  const double a = fast1 / (fast1 - s);
  const double u = fast2 / (fast2 - s);
  return {.ordinary_completes = a, .priority_replaced = u, .priority_completes = u,
          .ordinary_preempted = a};
}

}  // namespace

double detour_gf_unblocked(const RaceProbabilities& p, const DetourMarks& d) {
  const double den = detour_denominator(p, d);
  return p.ordinary_completes * d.ordinary_completes *
         (1.0 - p.priority_replaced * d.priority_replaced) / den;
}

double detour_gf_blocked(const RaceProbabilities& p, const DetourMarks& d) {
  const double den = detour_denominator(p, d);
  return p.ordinary_completes * d.ordinary_completes * p.priority_completes *
         d.priority_completes / den;
}

double head_of_line_mgf_bound(const ModelParams& params) {
  return real_quadratic_roots(-(params.mu2() + params.mu1() + params.lambda2()),
                              params.mu1() * params.mu2())
      .first;
}

double mgf_unblocked(const ModelParams& params, double s) {
  check_strip(params, s);
  return params.mu1() * (params.mu2() - s) / head_of_line_denominator(params, s);
}

double mgf_blocked(const ModelParams& params, double s) {
  check_strip(params, s);
  return params.mu1() * params.mu2() / head_of_line_denominator(params, s);
}

double mgf_unblocked_via_detour(const ModelParams& params, double s) {
  check_strip(params, s);
  return detour_gf_unblocked(clock_probabilities(params), clock_mgfs(params, s));
}

double mgf_blocked_via_detour(const ModelParams& params, double s) {
  check_strip(params, s);
  return detour_gf_blocked(clock_probabilities(params), clock_mgfs(params, s));
}

double VirtualServiceLaw::mixture_mean() const {
  return blocked_probability * mean_blocked + (1.0 - blocked_probability) * mean_unblocked;
}

double VirtualServiceLaw::mixture_m2() const {
  return blocked_probability * m2_blocked + (1.0 - blocked_probability) * m2_unblocked;
}

VirtualServiceLaw virtual_service_moments(const ModelParams& params) {
  require_stable(params);
  const double l1 = params.lambda1(), l2 = params.lambda2(), m1 = params.mu1(), m2 = params.mu2();
  const double m1m2 = m1 * m2;
  VirtualServiceLaw law;
  law.race = clock_probabilities(params);
  law.mean_unblocked = (m2 + l2) / m1m2;
  law.mean_blocked = (m1 + m2 + l2) / m1m2;
  law.m2_unblocked = 2.0 * ((m2 + l2) * (m2 + l2) + m1 * l2) / (m1m2 * m1m2);
  law.m2_blocked = 2.0 * ((m1 + m2 + l2) * (m1 + m2 + l2) - m1m2) / (m1m2 * m1m2);
  law.blocked_probability = *check_stability(params).pi0 * l2 / (l1 + m2);
  law.mean = l2 / ((l1 + m2) * (m2 + l2)) + (l1 + l2 + m2) / (m1 * (l1 + m2));
  law.m2 = 2.0 * ((l2 + m2) * (l2 + m2) * (l2 + m2 + l1) + l2 * m1 * (2.0 * l2 + m1 + 2.0 * m2)) /
           (m1 * m1 * m2 * (l1 + m2) * (l2 + m2));
  return law;
}

double SystemTimeLB::density(double t) const {
  if (t < 0.0) return 0.0;
  if (double_root) {
    return (1.0 - rho) * mu1 * ((mu2 - alpha1) * t + 1.0) * std::exp(-alpha1 * t);
  }
  return -c1 * std::exp(-alpha1 * t) - c2 * std::exp(-alpha2 * t);
}

double SystemTimeLB::total_mass() const {
  if (double_root) {
    const double a = alpha1;
    return (1.0 - rho) * mu1 * ((mu2 - a) / (a * a) + 1.0 / a);
  }
  return -c1 / alpha1 - c2 / alpha2;
}

double SystemTimeLB::mean() const {
  if (double_root) {
    const double a = alpha1;
    return (1.0 - rho) * mu1 * (2.0 * (mu2 - a) / (a * a * a) + 1.0 / (a * a));
  }
  return -c1 / (alpha1 * alpha1) - c2 / (alpha2 * alpha2);
}

SystemTimeLB system_time_lb(const ModelParams& params) {
  require_stable(params);
  const double l1 = params.lambda1(), l2 = params.lambda2(), m1 = params.mu1(), m2 = params.mu2();
  SystemTimeLB law;
  law.mu1 = m1;
  law.mu2 = m2;
  law.rho = l1 * (m2 + l2) / (m1 * m2);
  const double sum = m1 + m2 + l2 - l1;
  const double prod = m1 * m2 - l1 * m2 - l1 * l2;
  const double disc = sum * sum - 4.0 * prod;
  if (disc < 1e-12 * sum * sum) {
    law.double_root = true;
    law.alpha1 = law.alpha2 = 0.5 * sum;
    return law;
  }
  const auto [low, high] = real_quadratic_roots(-sum, prod);
  law.alpha1 = high;
  law.alpha2 = low;
  const double scale = (1.0 - law.rho) * m1;
  law.c1 = scale * (m2 - law.alpha1) / (law.alpha1 - law.alpha2);
  law.c2 = scale * (m2 - law.alpha2) / (law.alpha2 - law.alpha1);
  return law;
}

double system_time_mgf(const ModelParams& params, double s) {
  const SystemTimeLB law = system_time_lb(params);
  if (!(s < law.alpha2)) {
    throw Error(ErrorCode::kOutOfDomain, "system-time MGF diverges for s >= alpha2");
  }
  const double sum = law.alpha1 + law.alpha2;
  const double prod = params.mu1() * params.mu2() - params.lambda1() * params.mu2() -
                      params.lambda1() * params.lambda2();
  return (1.0 - law.rho) * params.mu1() * (params.mu2() - s) / (s * s - s * sum + prod);
}

double expected_overlap(const SystemTimeLB& law, double lambda1) {
  // Inner integral over t > x of (t - x) e^{-a t} is e^{-a x} / a^2; the outer
  // integral of x lambda1 e^{-(lambda1 + a) x} / a^2 gives lambda1 / (a^2 (lambda1 + a)^2).
  const auto single = [lambda1](double a) {
    return lambda1 / (a * a * (lambda1 + a) * (lambda1 + a));
  };
  if (law.double_root) {
    const double a = law.alpha1;
    const double s = lambda1 + a;
    const double linear_term =
        lambda1 * (2.0 / (a * a * s * s * s) + 2.0 / (a * a * a * s * s));
    return (1.0 - law.rho) * law.mu1 * ((law.mu2 - a) * linear_term + single(a));
  }
  return -law.c1 * single(law.alpha1) - law.c2 * single(law.alpha2);
}

double expected_overlap(const ModelParams& params) {
  return expected_overlap(system_time_lb(params), params.lambda1());
}

double age_lower_bound(const ModelParams& params) {
  const double l1 = params.lambda1();
  const double mean_service = (params.mu2() + params.lambda2()) / (params.mu1() * params.mu2());
  const double interarrival_m2 = 2.0 / (l1 * l1);
  const double cross_moment = expected_overlap(params) + mean_service / l1;
  return l1 * (0.5 * interarrival_m2 + cross_moment);
}

}  // namespace aoi
