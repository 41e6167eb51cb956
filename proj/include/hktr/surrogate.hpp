#pragma once

#include "hktr/kernels.hpp"
#include "hktr/problem.hpp"
#include "hktr/types.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace hktr {

/// Points with objective values and gradients (the data a Hermite interpolant reproduces).
struct TrainingSet {
  std::vector<Vector> points;
  std::vector<double> values;
  std::vector<Vector> gradients;

  std::size_t size() const noexcept { return points.size(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }

  void add(Vector point, double value, Vector gradient);

  /// Index of a stored point within 1e-10 * (1 + ||x||) of x, if any.
  std::optional<std::size_t> find_near(const Vector& x) const;

  /// Throws InvalidInput on size mismatches or on two points closer than the distinctness threshold.
  void validate() const;
};

/// Minimum separation for points to count as distinct.
double distinctness_threshold(const Vector& x);

/// Generalized Gram matrix for value and gradient functionals at `points`.
///
/// Unknown ordering is [values of all centers, gradient of center 0, gradient of center 1, ...].
Matrix assemble_gram(const KernelSpec& kernel, std::span<const Vector> points);

struct Evaluation {
  double value;
  Vector gradient;
};

struct ErrorBounds {
  double value_bound;
  double gradient_bound;
};

/// Fitted Hermite kernel interpolant
///   s(x) = sum_i alpha_i k(x_i, x) + <beta_i, grad_1 k(x_i, x)>
/// with its power function and RKHS-norm based error bounds. Immutable after fit().
class Surrogate {
 public:
  static constexpr double kJitterLadder[] = {0.0, 1e-18, 1e-16, 1e-14, 1e-12, 1e-10};

  static Surrogate fit(const KernelSpec& kernel, TrainingSet training, double norm_bound);

  const KernelSpec& kernel() const noexcept { return kernel_; }
  const TrainingSet& training() const noexcept { return training_; }
  const Vector& alpha() const noexcept { return alpha_; }
  /// One row per center.
  const Matrix& beta() const noexcept { return beta_; }
  const Matrix& gram() const noexcept { return gram_; }
  double jitter_used() const noexcept { return jitter_; }
  double norm_bound() const noexcept { return norm_bound_; }

  /// Same interpolant with a different RKHS norm bound.
  Surrogate with_norm_bound(double norm_bound) const;

  Evaluation evaluate(const Vector& x) const;
  double value(const Vector& x) const;

  /// Power function for the value functional.
  double power(const Vector& x) const;
  /// Power function for the derivative in coordinate direction `direction`.
  double power(const Vector& x, int direction) const;

  ErrorBounds error_bounds(const Vector& x) const;
  /// norm_bound * power(x); the value bound alone, cheaper than error_bounds().
  double value_error_bound(const Vector& x) const { return norm_bound_ * power(x); }

  double rkhs_norm() const;

  /// Writes centers, coefficients, norm bound and jitter as a plain-text record.
  void dump(std::ostream& os) const;

 private:
  // Flat kernels produce coefficients many orders of magnitude larger than the data, so the linear
  // algebra and every evaluation run in extended precision.
  using Real = long double;
  using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

  Surrogate(KernelSpec kernel, TrainingSet training) : kernel_(std::move(kernel)), training_(std::move(training)) {}

  /// Generalized evaluations of k(x, .) against all interpolation functionals.
  RealVector basis(const Vector& x) const;
  /// Column m holds the generalized evaluations of d/dx_m k(x, .).
  RealMatrix basis_jacobian(const Vector& x) const;
  double residual_norm(Real diag, const RealVector& b) const;

  KernelSpec kernel_;
  TrainingSet training_;
  Matrix gram_;
  RealMatrix gram_ext_;
  Eigen::LLT<RealMatrix> factor_;
  RealVector coefficients_;
  Vector alpha_;
  Matrix beta_;
  double jitter_ = 0.0;
  double norm_bound_ = 1.0;
};

/// RKHS-norm estimate from a global Hermite interpolant on `n_samples` uniform points of the problem box
/// (infinite bounds replaced by -2 and 2),
/// scaled by `safety`. The problem's evaluation counter is incremented once per sample.
double estimate_norm(const KernelSpec& kernel, Problem& problem, int n_samples, std::uint64_t sampler_seed,
                     double safety = 1.0);

/// Closed-form RKHS norm of J(mu) = -exp(-mu^2) + 3 exp(-0.001 mu^2) for the 1D Gaussian kernel.
/// Throws DomainError for eps^2 <= 1/2, where the norm diverges.
double analytic_norm_1d_gaussian(double eps);

}  // namespace hktr
