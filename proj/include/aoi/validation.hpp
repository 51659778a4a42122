#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace aoi {

enum class ToleranceKind { kAbsolute, kRelative, kRange, kExact };

struct CheckResult {
  int criterion = 0;
  std::string name;
  double expected = 0.0;  // for kRange: lower edge
  double observed = 0.0;
  double tolerance = 0.0;  // for kRange: upper edge
  ToleranceKind kind = ToleranceKind::kAbsolute;
  bool passed = false;
};

struct ValidationOptions {
  bool quick = false;  // 1e5 simulated deliveries instead of 1e6, except for the sweep
  std::uint64_t seed = 20170101;
  std::size_t threads = 1;
};

// Runs every acceptance cross-check, calling `on_result` as each completes.
std::vector<CheckResult> run_validation(const ValidationOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result = {});

void print_check(std::ostream& out, const CheckResult& check);

}  // namespace aoi
