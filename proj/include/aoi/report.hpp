#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "aoi/model.hpp"

namespace aoi {

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

struct AnalysisReport {
  ModelParams params;
  StabilityReport stability;
  // Closed-form quantities; empty when the point is unstable or too close to
  // the stability boundary (see error).
  std::optional<double> pi0{};
  std::optional<double> expected_queue_length{};
  std::optional<double> peak_age_1{};
  std::optional<double> age_lb_1{};
  std::optional<double> mean_virtual_service{};
  std::optional<double> rho{};
  std::optional<double> alpha1{};
  std::optional<double> alpha2{};
  // Defined regardless of stability when their own rates allow.
  std::optional<double> age_u2{};
  std::optional<double> age_ref{};
  std::string error{};  // empty on success

  bool ok() const { return error.empty(); }
};

AnalysisReport analyze(const ModelParams& params);

nlohmann::json to_json(const AnalysisReport& report);
void write_text(std::ostream& out, const AnalysisReport& report);

}  // namespace aoi
