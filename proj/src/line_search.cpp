#include "hktr/line_search.hpp"

#include "hktr/errors.hpp"

#include <cmath>

namespace hktr {

double descent_cosine(const Vector& gradient, const Vector& direction) {
  const double denom = gradient.norm() * direction.norm();
  if (denom == 0.0) return 0.0;
  return -gradient.dot(direction) / denom;
}

std::optional<LineSearchStep> armijo_backtrack(const Vector& x, double fx, const Vector& gradient,
                                               const Vector& direction, const Box& box,
                                               const LineSearchSettings& settings,
                                               const std::function<TrialPoint(const Vector&)>& trial) {
  if (!(gradient.dot(direction) < 0.0)) throw InvalidInput("line search direction is not a descent direction");
  const double cos_phi = descent_cosine(gradient, direction);
  const double grad_norm = gradient.norm();

  double step = 1.0;
  for (int j = 0; j <= settings.j_max; ++j, step *= settings.kappa_bt) {
    Vector candidate = box.project(x + step * direction);
    const double moved = (x - candidate).norm();
    if (moved == 0.0) continue;
    const TrialPoint t = trial(candidate);
    if (!t.feasible) continue;
    if (t.value - fx <= -settings.kappa_arm * grad_norm * moved * cos_phi) {
      return LineSearchStep{std::move(candidate), t.value, j, cos_phi};
    }
  }
  return std::nullopt;
}

bool bfgs_update(Matrix& inverse_hessian, const Vector& step, const Vector& grad_change) {
  const double sy = step.dot(grad_change);
  if (!(sy > 1e-10 * step.norm() * grad_change.norm())) return false;
  const double rho = 1.0 / sy;
  const Vector hy = inverse_hessian * grad_change;
  const double yhy = grad_change.dot(hy);
  // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
  inverse_hessian.noalias() -= rho * (step * hy.transpose() + hy * step.transpose());
  inverse_hessian.noalias() += (rho * rho * yhy + rho) * (step * step.transpose());
  return true;
}

Vector projected_quasi_newton_direction(const Matrix& inverse_hessian, const Vector& x, const Vector& gradient,
                                        const Box& box) {
  const Vector g_free = box.free_gradient(x, gradient);
  Vector p = -(inverse_hessian * g_free);
  for (Eigen::Index m = 0; m < p.size(); ++m) {
    if (g_free[m] == 0.0 && gradient[m] != 0.0) p[m] = 0.0;
  }
  return p;
}

}  // namespace hktr
