#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace epcgh {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 42;
  int threads = 0;
  std::vector<int> only;  // empty: all ten criteria
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

/// Runs the selected criteria in order; `on_result` sees each result as soon as it is ready.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// One line: "[PASS] criterion N: title | detail (x.xx s)".
std::string format_criterion(const CriterionResult& r);

}  // namespace epcgh
