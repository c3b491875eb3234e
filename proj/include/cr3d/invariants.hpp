#pragma once

#include <string>
#include <vector>

namespace cr3d {

struct CheckResult {
  std::string name;
  int p;
  bool pass;
  double value;
  double threshold;
};

struct CheckOptions {
  int p_max = 6;
  /// Added to the flip matrix and to basis coefficients before checking; 0 in normal use.
  double perturbation = 0.0;
  /// Multiplies every threshold.
  double tol_scale = 1.0;
};

/// Self-consistency checks across all modules for degrees 1..p_max.
std::vector<CheckResult> run_invariant_checks(const CheckOptions& opt);

}  // namespace cr3d
