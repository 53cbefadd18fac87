#pragma once

#include <string>
#include <vector>

namespace dnp2d::accept {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

int criterion_count();
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all();

// "[PASS] 03 picard-rk-cross-validation ..." one line per criterion
void print_result(const CriterionResult& r);

}  // namespace dnp2d::accept
