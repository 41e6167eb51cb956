#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace hktr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box with possibly infinite bounds. An all-infinite box means unconstrained.
struct Box {
  Vector lower;
  Vector upper;

  static Box unbounded(int dim) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {Vector::Constant(dim, -inf), Vector::Constant(dim, inf)};
  }

  static Box uniform(int dim, double lo, double hi) { return {Vector::Constant(dim, lo), Vector::Constant(dim, hi)}; }

  int dim() const { return static_cast<int>(lower.size()); }

  bool is_bounded() const { return lower.allFinite() && upper.allFinite(); }

  /// Copy with every infinite bound replaced by lo or hi.
  Box with_default_bounds(double lo, double hi) const {
    Box b = *this;
    for (int m = 0; m < dim(); ++m) {
      if (!std::isfinite(b.lower[m])) b.lower[m] = lo;
      if (!std::isfinite(b.upper[m])) b.upper[m] = hi;
    }
    return b;
  }

  bool has_any_bound() const {
    for (int m = 0; m < dim(); ++m) {
      if (std::isfinite(lower[m]) || std::isfinite(upper[m])) return true;
    }
    return false;
  }

  Vector project(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

  bool contains(const Vector& x) const {
    for (int m = 0; m < dim(); ++m) {
      if (!(x[m] >= lower[m] && x[m] <= upper[m])) return false;
    }
    return true;
  }

  /// ||x - P(x - g)||_inf, which reduces to ||g||_inf without active bounds.
  double projected_gradient_norm(const Vector& x, const Vector& g) const {
    return (x - project(x - g)).lpNorm<Eigen::Infinity>();
  }

  /// Gradient with components zeroed where the bound is active and the descent direction points outward.
  Vector free_gradient(const Vector& x, const Vector& g) const {
    Vector out = g;
    for (int m = 0; m < dim(); ++m) {
      if ((x[m] <= lower[m] && g[m] > 0.0) || (x[m] >= upper[m] && g[m] < 0.0)) out[m] = 0.0;
    }
    return out;
  }
};

}  // namespace hktr
