#pragma once

#include "hktr/errors.hpp"
#include "hktr/types.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hktr {

enum class Branch {
  AcceptedBySufficient,
  RejectedByNecessary,
  AcceptedByDirect,
  RejectedByDirect,
  /// The subproblem could not produce a candidate (line search failure or infeasible start); delta shrinks.
  SubproblemFailed,
};

enum class Termination { FirstOrder, Stagnation, MaxIterations, Stalled, Failed };

std::string_view to_string(Branch b);
std::string_view to_string(Termination t);

inline bool is_acceptance(Branch b) { return b == Branch::AcceptedBySufficient || b == Branch::AcceptedByDirect; }

struct IterationRecord {
  int outer_iter = 0;
  Vector candidate;
  Branch branch = Branch::SubproblemFailed;
  std::optional<double> rho;
  double delta_before = 0.0;
  double delta_after = 0.0;
  /// Projected surrogate gradient norm at the new iterate (accepted steps only).
  std::optional<double> foc_measure;
  /// True objective at the candidate, when it was evaluated by the driver.
  std::optional<double> j_value;
  double surrogate_value = 0.0;
  double error_bound = 0.0;
  double agc_value = 0.0;
  std::string subproblem;
  int inner_steps = 0;
  /// Objective evaluated only for the a-posteriori check (not counted as a FOM evaluation).
  std::optional<double> audit_value;
};

struct RunReport {
  std::string method;
  Vector x0;
  Vector final_iterate;
  double final_value = 0.0;
  /// Projected infinity norm of the true gradient at the final iterate.
  double final_foc = 0.0;
  std::size_t fom_evals = 0;
  std::size_t norm_estimation_evals = 0;
  int outer_iters = 0;
  double norm_bound = 0.0;
  Termination termination = Termination::Failed;
  bool success = false;
  std::string error;
  std::vector<IterationRecord> log;
  /// J at x0 followed by J at every accepted iterate.
  std::vector<double> accepted_values;
  int audit_checks = 0;
  int audit_violations = 0;
};

nlohmann::json to_json(const IterationRecord& r);
nlohmann::json to_json(const RunReport& r);

/// A run that ended in an error; carries everything recorded up to that point.
class RunFailure : public Error {
 public:
  RunFailure(const std::string& what, RunReport partial) : Error(what), report_(std::move(partial)) {}

  const RunReport& report() const noexcept { return report_; }

 private:
  RunReport report_;
};

}  // namespace hktr
