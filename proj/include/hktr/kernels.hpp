#pragma once

#include "hktr/types.hpp"

#include <string>
#include <string_view>

namespace hktr {

enum class KernelFamily { Gaussian, QuadraticMatern, Wendland2 };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Radial profile k(x,y) = psi(r), r = ||x - y||, together with
/// g1 = psi'(r)/r and g2 = (psi''(r) - psi'(r)/r)/r^2.
/// For the supported families both quotients are smooth in r, so no r = 0 branch is required.
template <typename T>
struct BasicRadialTerms {
  T value;
  T g1;
  T g2;
};

using RadialTerms = BasicRadialTerms<double>;

/// Strictly positive definite, translation-invariant kernel with a shape parameter.
///
/// Immutable after construction; all member functions are pure.
class KernelSpec {
 public:
  KernelSpec(KernelFamily family, double shape, int dim);

  static KernelSpec from_name(std::string_view name, double shape, int dim);

  KernelFamily family() const noexcept { return family_; }
  double shape() const noexcept { return shape_; }
  int dim() const noexcept { return dim_; }
  /// Wendland smoothness index floor(dim/2) + 3.
  int wendland_index() const noexcept { return dim_ / 2 + 3; }
  /// k(x, x), identical for every x.
  double diagonal() const noexcept;

  RadialTerms radial(double r) const noexcept { return radial_as<double>(r); }
  /// Radial terms evaluated in the floating-point type T (double or long double).
  template <typename T>
  BasicRadialTerms<T> radial_as(T r) const noexcept;

  double eval(const Vector& x, const Vector& y) const;
  /// Gradient with respect to the first argument.
  Vector grad1(const Vector& x, const Vector& y) const;
  /// [d/dx_i d/dy_j k(x, y)]_{ij}.
  Matrix cross_hessian(const Vector& x, const Vector& y) const;

 private:
  void check_dims(const Vector& x, const Vector& y) const;

  KernelFamily family_;
  double shape_;
  int dim_;
};

}  // namespace hktr
