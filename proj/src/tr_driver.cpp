#include "hktr/tr_driver.hpp"

#include "hktr/errors.hpp"
#include "hktr/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hktr {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(std::string("trust-region config: ") + what);
}

/// Mutable state of one run.
class Run {
 public:
  Run(Problem& problem, const KernelSpec& kernel, const TRConfig& cfg, double norm_bound)
      : problem_(problem), kernel_(kernel), cfg_(cfg), box_(problem.box()), norm_bound_(norm_bound) {}

  RunReport execute(const Vector& start) {
    report_.method = "hktr";
    report_.norm_bound = norm_bound_;
    report_.x0 = box_.project(start);
    try {
      loop(report_.x0);
    } catch (const RunFailure&) {
      throw;
    } catch (const Error& e) {
      fail(Termination::Failed, e.what());
    }
    return std::move(report_);
  }

 private:
  struct Datum {
    double value;
    Vector gradient;
    bool fresh;
  };

  Datum objective(const Vector& x) {
    if (auto idx = history_.find_near(x)) return {history_.values[*idx], history_.gradients[*idx], false};
    ObjectiveValue v = problem_.evaluate(x);
    ++report_.fom_evals;
    history_.add(x, v.value, v.gradient);
    return {v.value, std::move(v.gradient), true};
  }

  double audit_value(const Vector& x) {
    if (auto idx = history_.find_near(x)) return history_.values[*idx];
    return problem_.evaluate(x).value;
  }

  void refit() { surrogate_ = Surrogate::fit(kernel_, history_, norm_bound_); }

  void finish(const Vector& x, double value, Termination t) {
    report_.final_iterate = x;
    report_.final_value = value;
    const auto idx = history_.find_near(x);
    report_.final_foc = box_.projected_gradient_norm(x, history_.gradients[*idx]);
    report_.termination = t;
    report_.success = true;
  }

  [[noreturn]] void fail(Termination t, const std::string& what) {
    report_.termination = t;
    report_.success = false;
    report_.error = what;
    if (current_) {
      report_.final_iterate = *current_;
      report_.final_value = current_value_;
      if (auto idx = history_.find_near(*current_)) {
        report_.final_foc = box_.projected_gradient_norm(*current_, history_.gradients[*idx]);
      }
    }
    throw RunFailure(what, report_);
  }

  void check(bool ok) {
    ++report_.audit_checks;
    if (!ok) ++report_.audit_violations;
  }

  void loop(const Vector& x0) {
    Vector x = x0;
    Datum d0 = objective(x);
    current_ = x;
    current_value_ = d0.value;
    report_.accepted_values.push_back(d0.value);
    refit();

    if (box_.projected_gradient_norm(x, d0.gradient) <= cfg_.tau_foc) {
      finish(x, d0.value, Termination::FirstOrder);
      return;
    }

    double delta = cfg_.delta0;
    int rejects = 0;
    int i = 0;
    while (i < cfg_.i_max) {
      IterationRecord rec;
      rec.outer_iter = i;
      rec.delta_before = delta;

      // `informative` is false when the rejection leaves the surrogate unchanged and the next
      // subproblem would reproduce the same outcome.
      auto reject = [&](Branch b, bool informative = true) {
        delta *= cfg_.beta1_shrink;
        rec.branch = b;
        rec.delta_after = delta;
        report_.log.push_back(rec);
        if (!informative || (model_diff_ && *model_diff_ <= cfg_.tau_j)) {
          finish(x, current_value_, Termination::Stagnation);
          return true;
        }
        if (++rejects >= cfg_.max_rejects) {
          fail(Termination::Stalled,
               "stalled after " + std::to_string(rejects) + " consecutive rejections at outer iteration " +
                   std::to_string(i));
        }
        return false;
      };

      SubproblemResult sub;
      try {
        sub = solve_subproblem(*surrogate_, x, delta, cfg_.sub, box_);
      } catch (const LineSearchFailed& e) {
        rec.candidate = x;
        rec.subproblem = e.what();
        model_diff_.reset();
        if (reject(Branch::SubproblemFailed, false)) return;
        continue;
      } catch (const SubproblemInfeasible& e) {
        rec.candidate = x;
        rec.subproblem = e.what();
        model_diff_.reset();
        if (reject(Branch::SubproblemFailed)) return;
        continue;
      }

      rec.subproblem = std::string(to_string(sub.termination));
      rec.inner_steps = static_cast<int>(sub.iterates.size());
      rec.candidate = sub.candidate;
      if (sub.iterates.empty()) {
        // The surrogate is stationary at the iterate (inner tolerance tighter than the outer one).
        finish(x, current_value_, Termination::Stagnation);
        return;
      }

      const Surrogate& model = *surrogate_;
      const double j_hat_c = model.value(sub.candidate);
      const double eta_c = model.value_error_bound(sub.candidate);
      const double j_hat_agc = model.value(sub.agc);
      const double m_old = model.value(x);
      rec.surrogate_value = j_hat_c;
      rec.error_bound = eta_c;
      rec.agc_value = j_hat_agc;
      model_diff_ = (m_old - j_hat_c) / std::max({m_old, j_hat_c, 1.0});

      std::optional<Datum> datum;
      Branch branch;
      if (j_hat_c + eta_c <= j_hat_agc) {
        branch = Branch::AcceptedBySufficient;
      } else if (j_hat_c - eta_c > j_hat_agc) {
        if (cfg_.audit) {
          rec.audit_value = audit_value(sub.candidate);
          check(*rec.audit_value > j_hat_agc);
        }
        if (reject(Branch::RejectedByNecessary)) return;
        continue;
      } else {
        datum = objective(sub.candidate);
        rec.j_value = datum->value;
        const bool accept = datum->value <= j_hat_agc;
        const Surrogate previous = model;
        if (datum->fresh) refit();
        if (!accept) {
          const bool stuck = !datum->fresh && sub.termination != SubproblemTermination::NearBoundary;
          if (reject(Branch::RejectedByDirect, !stuck)) return;
          continue;
        }
        branch = Branch::AcceptedByDirect;
        finish_acceptance(rec, branch, previous, x, sub.candidate, *datum, m_old, delta);
        rejects = 0;
        ++i;
        if (stop(rec, x)) return;
        continue;
      }

      // Accepted without evaluating J.
      const Surrogate previous = model;
      datum = objective(sub.candidate);
      rec.j_value = datum->value;
      if (cfg_.audit) check(datum->value <= j_hat_agc);
      if (datum->fresh) refit();
      finish_acceptance(rec, branch, previous, x, sub.candidate, *datum, m_old, delta);
      rejects = 0;
      ++i;
      if (stop(rec, x)) return;
    }
    finish(x, current_value_, Termination::MaxIterations);
  }

  void finish_acceptance(IterationRecord& rec, Branch branch, const Surrogate& previous, Vector& x,
                         const Vector& candidate, const Datum& datum, double m_old, double& delta) {
    const double j_old = current_value_;
    const double m_new = previous.value(candidate);
    rec.branch = branch;
    rec.rho = rho(j_old, datum.value, m_old, m_new);
    delta = update_radius(rec.rho, delta, cfg_);
    rec.delta_after = delta;

    if (cfg_.audit) {
      check(datum.value <= j_old);
      check(std::abs(surrogate_->value(candidate) - datum.value) <= 1e-8 * std::max(1.0, std::abs(datum.value)));
    }

    x = candidate;
    current_ = x;
    current_value_ = datum.value;
    report_.accepted_values.push_back(datum.value);
    report_.outer_iters += 1;
    rec.foc_measure = box_.projected_gradient_norm(x, surrogate_->evaluate(x).gradient);
    report_.log.push_back(rec);
  }

  bool stop(const IterationRecord& rec, const Vector& x) {
    if (*rec.foc_measure <= cfg_.tau_foc) {
      finish(x, current_value_, Termination::FirstOrder);
      return true;
    }
    if (*model_diff_ <= cfg_.tau_j) {
      finish(x, current_value_, Termination::Stagnation);
      return true;
    }
    return false;
  }

  Problem& problem_;
  const KernelSpec& kernel_;
  const TRConfig& cfg_;
  Box box_;
  double norm_bound_;
  TrainingSet history_;
  std::optional<Surrogate> surrogate_;
  std::optional<Vector> current_;
  double current_value_ = 0.0;
  /// Relative model decrease predicted for the latest candidate.
  std::optional<double> model_diff_;
  RunReport report_;
};

}  // namespace

void TRConfig::validate() const {
  require(delta0 > 0.0, "delta0 must be positive");
  require(i_max >= 1, "i_max must be at least 1");
  require(tau_foc > 0.0, "tau_foc must be positive");
  require(tau_j > 0.0, "tau_j must be positive");
  require(xi1 > 0.0 && xi1 < xi2 && xi2 < 1.0, "need 0 < xi1 < xi2 < 1");
  require(beta_radius > 0.0 && beta_radius < 1.0, "beta_radius must lie in (0, 1)");
  require(beta1_shrink > 0.0 && beta1_shrink < 1.0, "beta1_shrink must lie in (0, 1)");
  require(max_rejects >= 1, "max_rejects must be at least 1");
  switch (norm.kind) {
    case NormSource::Kind::Estimated:
      require(norm.n_samples >= 1, "norm n_samples must be at least 1");
      require(norm.safety >= 1.0, "norm safety factor must be at least 1");
      break;
    case NormSource::Kind::Fixed: require(norm.value > 0.0, "fixed norm must be positive"); break;
    case NormSource::Kind::Analytic1D: break;
  }
  sub.validate();
}

std::optional<double> rho(double j_old, double j_new, double m_old, double m_new) {
  const double predicted = m_old - m_new;
  if (std::abs(predicted) <= 1e-14 * (1.0 + std::abs(m_old))) return std::nullopt;
  return (j_old - j_new) / predicted;
}

double update_radius(std::optional<double> r, double delta, const TRConfig& cfg) {
  if (!(delta > 0.0)) throw InvalidInput("trust-region radius must be positive");
  if (!r || *r < cfg.xi1) return cfg.beta_radius * delta;
  if (*r >= cfg.xi2) return delta / cfg.beta_radius;
  return delta;
}

double resolve_norm_bound(const KernelSpec& kernel, Problem& problem, const NormSource& source) {
  switch (source.kind) {
    case NormSource::Kind::Fixed: return source.value;
    case NormSource::Kind::Analytic1D:
      if (problem.name() != "oned" || kernel.family() != KernelFamily::Gaussian) {
        throw InvalidInput("the analytic norm is only available for the 1D problem with the Gaussian kernel");
      }
      return analytic_norm_1d_gaussian(kernel.shape());
    case NormSource::Kind::Estimated:
      return estimate_norm(kernel, problem, source.n_samples, source.seed, source.safety);
  }
  throw InvalidInput("unknown norm source");
}

RunReport run_trust_region(Problem& problem, const KernelSpec& kernel, const Vector& x0, const TRConfig& cfg,
                           double norm_bound) {
  cfg.validate();
  if (x0.size() != problem.dim()) throw InvalidInput("start point dimension does not match the problem");
  if (kernel.dim() != problem.dim()) throw InvalidInput("kernel dimension does not match the problem");
  if (!(norm_bound > 0.0)) throw InvalidInput("norm bound must be positive");
  Run run(problem, kernel, cfg, norm_bound);
  return run.execute(x0);
}

RunReport run_trust_region(Problem& problem, const KernelSpec& kernel, const Vector& x0, const TRConfig& cfg) {
  cfg.validate();
  const std::size_t before = problem.evaluations();
  const double bound = resolve_norm_bound(kernel, problem, cfg.norm);
  const std::size_t spent = problem.evaluations() - before;
  try {
    RunReport report = run_trust_region(problem, kernel, x0, cfg, bound);
    report.norm_estimation_evals = spent;
    return report;
  } catch (RunFailure& f) {
    RunReport partial = f.report();
    partial.norm_estimation_evals = spent;
    throw RunFailure(f.what(), std::move(partial));
  }
}

}  // namespace hktr
