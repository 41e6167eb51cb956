#pragma once

#include "hktr/line_search.hpp"
#include "hktr/surrogate.hpp"
#include "hktr/types.hpp"

#include <string_view>
#include <vector>

namespace hktr {

struct SubproblemConfig {
  double kappa_bt = 0.5;
  double kappa_arm = 1e-4;
  double tau_sub = 1e-8;
  double beta2 = 0.95;
  int l_max = 50;
  int j_max = 30;
  /// Smallest admissible surrogate value in the relative error constraint.
  double positivity_floor = 1e-12;

  void validate() const;
  LineSearchSettings line_search() const { return {kappa_bt, kappa_arm, j_max}; }
};

enum class SubproblemTermination { StationaryInner, NearBoundary, MaxInnerIters, LineSearchFailed };

std::string_view to_string(SubproblemTermination t);

/// One accepted inner step.
struct InnerStep {
  Vector point;
  double value;
  /// eta / J_hat at the accepted point.
  double ratio;
  int j;
  double cos_phi;
  /// ||grad J_hat|| (free components) at the start of the step.
  double grad_norm;
  /// Surrogate value at the start of the step.
  double start_value;
  bool steepest_descent_reset;
};

struct SubproblemResult {
  Vector candidate;
  Vector agc;
  std::vector<InnerStep> iterates;
  SubproblemTermination termination;
  int direction_resets = 0;
};

/// delta - eta(x) / J_hat(x). Throws AssumptionViolation when J_hat(x) <= positivity_floor.
double constraint_value(const Surrogate& s, double delta, const Vector& x, double positivity_floor = 1e-12);

/// Armijo search on the surrogate along `direction`, admitting only points with constraint_value >= 0.
/// Throws LineSearchFailed when no j <= j_max qualifies and InvalidInput for a non-descent direction.
LineSearchStep armijo_search(const Surrogate& s, const Vector& x, const Vector& direction, double delta,
                             const SubproblemConfig& cfg, const Box& box);

/// BFGS on min J_hat s.t. constraint_value >= 0 (projected onto `box`), starting from x0.
///
/// Stops on inner stationarity, when the iterate reaches the band beta2 * delta <= eta / J_hat <= delta,
/// after l_max steps, or when the line search fails after the first step. A failure on the first step
/// throws LineSearchFailed; an infeasible start throws SubproblemInfeasible.
SubproblemResult solve_subproblem(const Surrogate& s, const Vector& x0, double delta, const SubproblemConfig& cfg,
                                  const Box& box);

}  // namespace hktr
