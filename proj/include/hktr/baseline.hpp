#pragma once

#include "hktr/problem.hpp"
#include "hktr/report.hpp"

#include <vector>

namespace hktr {

struct BaselineConfig {
  double tau_foc = 1e-7;
  double tau_j = 1e-14;
  int i_max = 500;
  double kappa_bt = 0.5;
  double kappa_arm = 1e-4;
  int j_max = 30;

  void validate() const;
};

/// Projected BFGS with Armijo backtracking directly on the objective.
/// Every trial point of the line search costs one evaluation of (J, grad J).
///
/// Throws RunFailure when the line search fails before any termination criterion holds.
RunReport minimize(Problem& problem, const Vector& x0, const BaselineConfig& cfg);

struct ReferenceSolution {
  Vector point;
  double value;
  std::vector<RunReport> runs;
};

/// Best result of tight-tolerance baseline runs from every start. Throws NumericalBreakdown if all fail.
ReferenceSolution reference_solution(Problem& problem, const std::vector<Vector>& starts);

}  // namespace hktr
