#pragma once

// Randomized property suites shared by the unit tests and the acceptance runner.
// Each suite returns its number of checks and violations.

#include "hktr/kernels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hktr::props {

struct Tally {
  long checks = 0;
  long violations = 0;
  /// Description of the first few violations.
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what);
  Tally& operator+=(const Tally& other);
};

/// Interpolation conditions, Gram symmetry and positive definiteness on random instances.
Tally exactness_suite(int instances, std::uint64_t seed);

/// Value and gradient error bounds for f = sum_j c_j k(z_j, .) with exactly known norm,
/// interpolated on a subset of the z_j.
Tally error_bound_suite(int instances, int points_per_instance, std::uint64_t seed);

/// Power function: vanishing at centers, bounded by sqrt(k(x,x)), monotone under center addition,
/// Hoelder bound 4 sqrt(C_k) |x - y|^(1/2).
Tally power_suite(int pairs, std::uint64_t seed);

/// ||grad s(x) - grad s(x')|| <= 2 C_grad_k sqrt(p) ||s|| |x - x'|.
Tally lipschitz_suite(int pairs, std::uint64_t seed);

/// Analytic gradients of kernels, surrogates and benchmark problems against central differences.
Tally finite_difference_suite(std::uint64_t seed);

/// Lipschitz constant of y -> k(x, y), sampled densely along the radius.
double kernel_lipschitz(const KernelSpec& k);
/// Largest Lipschitz constant of y -> d_1^l d_2^l k(x, y) over l, sampled densely.
double mixed_derivative_lipschitz(const KernelSpec& k);

/// RKHS norm of J(mu) = -exp(-mu^2) + 3 exp(-0.001 mu^2) for the 1D Gaussian kernel, by adaptive
/// quadrature of the Fourier quotient integral.
double oned_norm_by_quadrature(double eps);

/// Unitary Fourier transform of J at w, by adaptive quadrature of the defining integral.
double oned_fourier_by_quadrature(double w);

}  // namespace hktr::props
