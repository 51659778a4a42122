#include <cstring>
#include <iostream>
#include <map>

#include "aoi/validation.hpp"

int main(int argc, char** argv) {
  aoi::ValidationOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) options.quick = true;
  }
  std::map<int, bool> criteria;
  const auto results = aoi::run_validation(options, [&](const aoi::CheckResult& c) {
    aoi::print_check(std::cout, c);
    std::cout.flush();
    auto [it, inserted] = criteria.try_emplace(c.criterion, true);
    it->second = it->second && c.passed;
  });
  std::cout << '\n';
  bool all = true;
  for (const auto& [criterion, passed] : criteria) {
    std::cout << (passed ? "PASS" : "FAIL") << " criterion " << criterion << '\n';
    all = all && passed;
  }
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << " (" << results.size() << " checks)\n";
  return all ? 0 : 1;
}
