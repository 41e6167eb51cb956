#pragma once

#include "hktr/kernels.hpp"
#include "hktr/problem.hpp"
#include "hktr/report.hpp"
#include "hktr/subproblem.hpp"

#include <cstdint>
#include <optional>

namespace hktr {

/// Where the RKHS norm bound of the objective comes from.
struct NormSource {
  enum class Kind { Analytic1D, Estimated, Fixed };

  Kind kind = Kind::Estimated;
  int n_samples = 50;
  std::uint64_t seed = 0;
  double safety = 1.0;
  double value = 1.0;

  static NormSource analytic() { return {Kind::Analytic1D}; }
  static NormSource estimated(int n_samples, std::uint64_t seed, double safety = 1.0) {
    return {Kind::Estimated, n_samples, seed, safety};
  }
  static NormSource fixed(double value) { return {Kind::Fixed, 0, 0, 1.0, value}; }
};

struct TRConfig {
  double delta0 = 0.5;
  int i_max = 100;
  double tau_foc = 1e-7;
  double tau_j = 1e-14;
  double xi1 = 0.1;
  double xi2 = 0.9;
  double beta_radius = 0.5;
  double beta1_shrink = 0.5;
  int max_rejects = 15;
  SubproblemConfig sub;
  NormSource norm;
  /// Evaluate J at every branch decided without it and check the decision (extra evaluations are not counted).
  bool audit = false;

  void validate() const;
};

/// (J_old - J_new) / (M_old - M_new), or nullopt when the model decrease is degenerate.
std::optional<double> rho(double j_old, double j_new, double m_old, double m_new);

double update_radius(std::optional<double> rho, double delta, const TRConfig& cfg);

/// Resolves the configured norm source. Estimation samples are counted by `problem` but not by the driver.
double resolve_norm_bound(const KernelSpec& kernel, Problem& problem, const NormSource& source);

/// Hermite kernel trust-region method; the projected variant is used whenever the problem box has bounds.
///
/// Throws RunFailure (with the partial report) when the run stalls or hits an unrecoverable numerical error.
RunReport run_trust_region(Problem& problem, const KernelSpec& kernel, const Vector& x0, const TRConfig& cfg);

/// Same as run_trust_region with a norm bound that has already been resolved.
RunReport run_trust_region(Problem& problem, const KernelSpec& kernel, const Vector& x0, const TRConfig& cfg,
                           double norm_bound);

}  // namespace hktr
