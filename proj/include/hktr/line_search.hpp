#pragma once

#include "hktr/types.hpp"

#include <functional>
#include <optional>

namespace hktr {

struct LineSearchSettings {
  double kappa_bt = 0.5;
  double kappa_arm = 1e-4;
  int j_max = 30;
};

/// Outcome of evaluating a trial point: its objective value and whether it satisfies the side constraint.
struct TrialPoint {
  double value;
  bool feasible;
};

struct LineSearchStep {
  Vector point;
  double value;
  int j;
  double cos_phi;
};

/// cos of the angle between -gradient and direction.
double descent_cosine(const Vector& gradient, const Vector& direction);

/// Projected Armijo backtracking: the smallest j <= j_max with
///   f(x(j)) - f(x) <= -kappa_arm * ||g|| * ||x - x(j)|| * cos(phi),   x(j) = P(x + kappa_bt^j p),
/// and a feasible trial. Trials that do not move the point are skipped. Returns nullopt when no j qualifies.
/// Throws InvalidInput unless <g, p> < 0.
std::optional<LineSearchStep> armijo_backtrack(const Vector& x, double fx, const Vector& gradient,
                                               const Vector& direction, const Box& box,
                                               const LineSearchSettings& settings,
                                               const std::function<TrialPoint(const Vector&)>& trial);

/// Inverse-Hessian BFGS update, skipped when <s, y> <= 1e-10 ||s|| ||y||. Returns whether it was applied.
bool bfgs_update(Matrix& inverse_hessian, const Vector& step, const Vector& grad_change);

/// Quasi-Newton direction restricted to the free variables: components whose bound is active and whose
/// descent direction points outward are fixed at zero.
Vector projected_quasi_newton_direction(const Matrix& inverse_hessian, const Vector& x, const Vector& gradient,
                                        const Box& box);

}  // namespace hktr
