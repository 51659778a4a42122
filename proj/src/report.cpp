#include "aoi/report.hpp"

#include <charconv>
#include <ostream>

#include "aoi/age_analysis.hpp"
#include "aoi/analytic.hpp"
#include "aoi/errors.hpp"

namespace aoi {

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

AnalysisReport analyze(const ModelParams& params) {
  AnalysisReport r{.params = params, .stability = check_stability(params)};
  if (params.lambda2() > 0.0) r.age_u2 = priority_age(params);
  if (params.lambda1() < params.mu1()) r.age_ref = reference_mm1_age(params.lambda1(), params.mu1());
  try {
    require_stable(params);
    r.pi0 = r.stability.pi0;
    r.expected_queue_length = expected_queue_length(params);
    r.peak_age_1 = peak_age_ordinary(params);
    r.age_lb_1 = age_lower_bound(params);
    r.mean_virtual_service = virtual_service_moments(params).mean;
    const SystemTimeLB law = system_time_lb(params);
    r.rho = law.rho;
    r.alpha1 = law.alpha1;
    r.alpha2 = law.alpha2;
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const AnalysisReport& r) {
  nlohmann::json j;
  j["lambda1"] = r.params.lambda1();
  j["lambda2"] = r.params.lambda2();
  j["mu1"] = r.params.mu1();
  j["mu2"] = r.params.mu2();
  j["margin"] = r.stability.margin;
  j["stable"] = r.stability.is_stable;
  j["pi0"] = optional_number(r.pi0);
  j["e_n"] = optional_number(r.expected_queue_length);
  j["peak_age_1"] = optional_number(r.peak_age_1);
  j["age_lb_1"] = optional_number(r.age_lb_1);
  j["age_u2"] = optional_number(r.age_u2);
  j["age_ref"] = optional_number(r.age_ref);
  j["mean_z"] = optional_number(r.mean_virtual_service);
  j["rho"] = optional_number(r.rho);
  j["alpha1"] = optional_number(r.alpha1);
  j["alpha2"] = optional_number(r.alpha2);
  j["error"] = r.ok() ? nlohmann::json(nullptr) : nlohmann::json(r.error);
  return j;
}

void write_text(std::ostream& out, const AnalysisReport& r) {
  const auto line = [&out](const char* name, const std::optional<double>& v) {
    out << name << " = " << (v ? format_double(*v) : std::string("-")) << '\n';
  };
  out << "lambda1 = " << format_double(r.params.lambda1()) << '\n'
      << "lambda2 = " << format_double(r.params.lambda2()) << '\n'
      << "mu1 = " << format_double(r.params.mu1()) << '\n'
      << "mu2 = " << format_double(r.params.mu2()) << '\n'
      << "margin = " << format_double(r.stability.margin) << '\n'
      << "stable = " << (r.stability.is_stable ? "true" : "false") << '\n';
  line("pi0", r.pi0);
  line("e_n", r.expected_queue_length);
  line("peak_age_1", r.peak_age_1);
  line("age_lb_1", r.age_lb_1);
  line("age_u2", r.age_u2);
  line("age_ref", r.age_ref);
  line("mean_z", r.mean_virtual_service);
  line("rho", r.rho);
  line("alpha1", r.alpha1);
  line("alpha2", r.alpha2);
  if (!r.ok()) out << "error = " << r.error << '\n';
}

}  // namespace aoi
