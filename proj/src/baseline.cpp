#include "hktr/baseline.hpp"

#include "hktr/errors.hpp"
#include "hktr/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hktr {

void BaselineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidInput(std::string("baseline config: ") + what);
  };
  require(tau_foc > 0.0, "tau_foc must be positive");
  require(tau_j > 0.0, "tau_j must be positive");
  require(i_max >= 1, "i_max must be at least 1");
  require(kappa_bt > 0.0 && kappa_bt < 1.0, "kappa_bt must lie in (0, 1)");
  require(kappa_arm > 0.0 && kappa_arm < 0.5, "kappa_arm must lie in (0, 0.5)");
  require(j_max >= 0, "j_max must be non-negative");
}

RunReport minimize(Problem& problem, const Vector& x0, const BaselineConfig& cfg) {
  cfg.validate();
  if (x0.size() != problem.dim()) throw InvalidInput("start point dimension does not match the problem");
  const Box box = problem.box();

  RunReport report;
  report.method = "baseline";
  report.x0 = box.project(x0);

  Vector x = report.x0;
  ObjectiveValue cur;
  auto finish = [&](Termination t) {
    report.final_iterate = x;
    report.final_value = cur.value;
    report.final_foc = box.projected_gradient_norm(x, cur.gradient);
    report.termination = t;
    report.success = t != Termination::Stalled && t != Termination::Failed;
  };

  try {
    cur = problem.evaluate(x);
    ++report.fom_evals;
    report.accepted_values.push_back(cur.value);

    const Eigen::Index p = x.size();
    Matrix h = Matrix::Identity(p, p);
    const LineSearchSettings ls{cfg.kappa_bt, cfg.kappa_arm, cfg.j_max};

    for (int i = 0; i < cfg.i_max; ++i) {
      if (box.projected_gradient_norm(x, cur.gradient) <= cfg.tau_foc) {
        finish(Termination::FirstOrder);
        return report;
      }
      const Vector g = box.free_gradient(x, cur.gradient);

      std::optional<ObjectiveValue> accepted;
      auto trial = [&](const Vector& y) -> TrialPoint {
        ObjectiveValue v = problem.evaluate(y);
        ++report.fom_evals;
        const double value = v.value;
        accepted = std::move(v);
        return {value, true};
      };

      Vector dir = projected_quasi_newton_direction(h, x, cur.gradient, box);
      if (descent_cosine(g, dir) < 1e-8) {
        h.setIdentity();
        dir = -g;
      }
      auto step = armijo_backtrack(x, cur.value, g, dir, box, ls, trial);
      const double resolution = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(cur.value));
      if (!step && std::abs(g.dot(dir)) <= resolution) {
        // No decrease along dir is representable in J.
        finish(Termination::Stagnation);
        return report;
      }
      if (!step && !h.isIdentity()) {
        h.setIdentity();
        step = armijo_backtrack(x, cur.value, g, -g, box, ls, trial);
      }
      if (!step) {
        finish(Termination::Stalled);
        report.error = "line search failed at iteration " + std::to_string(i);
        throw RunFailure(report.error, report);
      }

      bfgs_update(h, step->point - x, accepted->gradient - cur.gradient);
      const double j_diff = (cur.value - accepted->value) / std::max({cur.value, accepted->value, 1.0});
      IterationRecord rec;
      rec.outer_iter = i;
      rec.candidate = step->point;
      rec.branch = Branch::AcceptedByDirect;
      rec.j_value = accepted->value;
      rec.inner_steps = step->j + 1;
      report.log.push_back(std::move(rec));

      x = std::move(step->point);
      cur = std::move(*accepted);
      report.accepted_values.push_back(cur.value);
      report.outer_iters = i + 1;
      if (j_diff <= cfg.tau_j) {
        finish(box.projected_gradient_norm(x, cur.gradient) <= cfg.tau_foc ? Termination::FirstOrder
                                                                            : Termination::Stagnation);
        return report;
      }
    }
    finish(box.projected_gradient_norm(x, cur.gradient) <= cfg.tau_foc ? Termination::FirstOrder
                                                                        : Termination::MaxIterations);
    return report;
  } catch (const RunFailure&) {
    throw;
  } catch (const Error& e) {
    report.termination = Termination::Failed;
    report.error = e.what();
    throw RunFailure(e.what(), report);
  }
}

ReferenceSolution reference_solution(Problem& problem, const std::vector<Vector>& starts) {
  if (starts.empty()) throw InvalidInput("reference solution needs at least one start");
  BaselineConfig cfg;
  cfg.tau_foc = 1e-10;
  cfg.tau_j = 1e-16;
  cfg.i_max = 2000;

  ReferenceSolution out;
  std::string last_error;
  for (const Vector& s : starts) {
    try {
      RunReport r = minimize(problem, s, cfg);
      if (out.runs.empty() || r.final_value < out.value) {
        out.point = r.final_iterate;
        out.value = r.final_value;
      }
      out.runs.push_back(std::move(r));
    } catch (const RunFailure& f) {
      last_error = f.what();
    }
  }
  if (out.runs.empty()) throw NumericalBreakdown("every reference run failed; last error: " + last_error);
  return out;
}

}  // namespace hktr
