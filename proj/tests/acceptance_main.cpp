// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.  With an integer argument only that
// criterion runs.  Exit code is the number of failures.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "dnp2d/accept.hpp"

int main(int argc, char** argv) {
  using namespace dnp2d::accept;
  std::vector<CriterionResult> results;
  try {
    if (argc > 1 && std::string(argv[1]) != "all") {
      results.push_back(run_criterion(std::atoi(argv[1])));
    } else {
      results = run_all();
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 99;
  }
  int fails = 0;
  for (const auto& r : results) {
    print_result(r);
    if (!r.pass) ++fails;
  }
  std::printf("%zu criteria run, %d failed\n", results.size(), fails);
  return fails;
}
