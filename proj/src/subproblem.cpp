#include "hktr/subproblem.hpp"

#include "hktr/errors.hpp"

#include <cmath>
#include <string>

namespace hktr {
namespace {

constexpr double kMinCosine = 1e-8;

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(std::string("subproblem config: ") + what);
}

/// eta / J_hat at x, or nullopt when J_hat is not safely positive.
std::optional<double> relative_bound(const Surrogate& s, const Vector& x, double floor) {
  const double v = s.value(x);
  if (!(v > floor)) return std::nullopt;
  return s.value_error_bound(x) / v;
}

}  // namespace

void SubproblemConfig::validate() const {
  require(kappa_bt > 0.0 && kappa_bt < 1.0, "kappa_bt must lie in (0, 1)");
  require(kappa_arm > 0.0 && kappa_arm < 0.5, "kappa_arm must lie in (0, 0.5)");
  require(tau_sub > 0.0, "tau_sub must be positive");
  require(beta2 > 0.0 && beta2 < 1.0, "beta2 must lie in (0, 1)");
  require(l_max >= 1, "l_max must be at least 1");
  require(j_max >= 0, "j_max must be non-negative");
  require(positivity_floor > 0.0, "positivity_floor must be positive");
}

std::string_view to_string(SubproblemTermination t) {
  switch (t) {
    case SubproblemTermination::StationaryInner: return "StationaryInner";
    case SubproblemTermination::NearBoundary: return "NearBoundary";
    case SubproblemTermination::MaxInnerIters: return "MaxInnerIters";
    case SubproblemTermination::LineSearchFailed: return "LineSearchFailed";
  }
  return "?";
}

double constraint_value(const Surrogate& s, double delta, const Vector& x, double positivity_floor) {
  if (!(delta > 0.0)) throw InvalidInput("trust-region radius must be positive");
  const auto ratio = relative_bound(s, x, positivity_floor);
  if (!ratio) {
    throw AssumptionViolation("surrogate value " + std::to_string(s.value(x)) +
                              " is not bounded away from zero; add a larger positive offset to the objective");
  }
  return delta - *ratio;
}

namespace {

std::optional<LineSearchStep> search(const Surrogate& s, const Vector& x, double fx, const Vector& gradient,
                                     const Vector& direction, double delta, const SubproblemConfig& cfg,
                                     const Box& box) {
  auto trial = [&](const Vector& y) -> TrialPoint {
    const double v = s.value(y);
    if (!(v > cfg.positivity_floor)) return {v, false};
    return {v, s.value_error_bound(y) / v <= delta};
  };
  return armijo_backtrack(x, fx, gradient, direction, box, cfg.line_search(), trial);
}

}  // namespace

LineSearchStep armijo_search(const Surrogate& s, const Vector& x, const Vector& direction, double delta,
                             const SubproblemConfig& cfg, const Box& box) {
  const Evaluation ev = s.evaluate(x);
  const Vector g = box.free_gradient(x, ev.gradient);
  auto step = search(s, x, ev.value, g, direction, delta, cfg, box);
  if (!step) throw LineSearchFailed("no Armijo step within j_max = " + std::to_string(cfg.j_max));
  return *step;
}

SubproblemResult solve_subproblem(const Surrogate& s, const Vector& x0, double delta, const SubproblemConfig& cfg,
                                  const Box& box) {
  cfg.validate();
  if (!(constraint_value(s, delta, x0, cfg.positivity_floor) > 0.0)) {
    throw SubproblemInfeasible("start point violates the trust-region constraint");
  }

  const Eigen::Index p = x0.size();
  SubproblemResult result;
  result.candidate = x0;
  result.agc = x0;
  result.termination = SubproblemTermination::MaxInnerIters;

  Matrix h = Matrix::Identity(p, p);
  bool h_is_identity = true;
  Vector x = x0;
  Evaluation ev = s.evaluate(x);

  for (int l = 0; l < cfg.l_max; ++l) {
    if (box.projected_gradient_norm(x, ev.gradient) <= cfg.tau_sub) {
      result.termination = SubproblemTermination::StationaryInner;
      break;
    }
    const Vector g = box.free_gradient(x, ev.gradient);

    Vector dir = projected_quasi_newton_direction(h, x, ev.gradient, box);
    bool reset = false;
    if (descent_cosine(g, dir) < kMinCosine) {
      h.setIdentity();
      h_is_identity = true;
      dir = -g;
      reset = true;
    }

    auto step = search(s, x, ev.value, g, dir, delta, cfg, box);
    if (!step && !h_is_identity) {
      h.setIdentity();
      h_is_identity = true;
      dir = -g;
      reset = true;
      step = search(s, x, ev.value, g, dir, delta, cfg, box);
    }
    if (reset) ++result.direction_resets;
    if (!step) {
      if (l == 0) throw LineSearchFailed("no Armijo step at the first inner iteration");
      result.termination = SubproblemTermination::LineSearchFailed;
      break;
    }

    Evaluation next = s.evaluate(step->point);
    const double ratio = *relative_bound(s, step->point, cfg.positivity_floor);
    result.iterates.push_back(
        InnerStep{step->point, step->value, ratio, step->j, step->cos_phi, g.norm(), ev.value, reset});
    if (l == 0) result.agc = step->point;

    if (bfgs_update(h, step->point - x, next.gradient - ev.gradient)) h_is_identity = false;
    x = std::move(step->point);
    ev = std::move(next);

    if (ratio >= cfg.beta2 * delta && ratio <= delta) {
      result.termination = SubproblemTermination::NearBoundary;
      break;
    }
  }

  result.candidate = x;
  return result;
}

}  // namespace hktr
