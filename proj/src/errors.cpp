#include "aoi/errors.hpp"

namespace aoi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidRate: return "InvalidRate";
    case ErrorCode::kUnstableSystem: return "UnstableSystem";
    case ErrorCode::kNearBoundary: return "NearBoundary";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kSingularDenominator: return "SingularDenominator";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace aoi
