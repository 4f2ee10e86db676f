// Acceptance gate: one pass/fail line per criterion, nonzero exit if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "epcgh/acceptance.hpp"

int main(int argc, char** argv) {
  epcgh::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  epcgh::run_acceptance(opt, [&](const epcgh::CriterionResult& r) {
    std::printf("%s\n", epcgh::format_criterion(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
