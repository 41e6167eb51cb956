#include "hktr/kernels.hpp"

#include "hktr/errors.hpp"

#include <cmath>

namespace hktr {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Gaussian:
      return "gaussian";
    case KernelFamily::QuadraticMatern:
      return "quad_matern";
    case KernelFamily::Wendland2:
      return "wendland2";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "quad_matern") return KernelFamily::QuadraticMatern;
  if (name == "wendland2") return KernelFamily::Wendland2;
  throw InvalidInput("unknown kernel family '" + std::string(name) + "' (expected gaussian, quad_matern or wendland2)");
}

KernelSpec::KernelSpec(KernelFamily family, double shape, int dim) : family_(family), shape_(shape), dim_(dim) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw InvalidInput("kernel shape parameter must be positive and finite");
  if (dim < 1) throw InvalidInput("kernel dimension must be at least 1");
}

KernelSpec KernelSpec::from_name(std::string_view name, double shape, int dim) {
  return KernelSpec(kernel_family_from_string(name), shape, dim);
}

double KernelSpec::diagonal() const noexcept {
  switch (family_) {
    case KernelFamily::Gaussian:
      return 1.0;
    case KernelFamily::QuadraticMatern:
      return 3.0;
    case KernelFamily::Wendland2: {
      const double l = wendland_index();
      return 3.0 * (l + 1) * (l + 2) * (l + 3) * (l + 4);
    }
  }
  return 0.0;
}

template <typename T>
BasicRadialTerms<T> KernelSpec::radial_as(T r) const noexcept {
  using std::exp;
  using std::pow;
  const T eps = shape_;
  const T eps2 = eps * eps;
  switch (family_) {
    case KernelFamily::Gaussian: {
      const T v = exp(-eps2 * r * r);
      return {v, -2 * eps2 * v, 4 * eps2 * eps2 * v};
    }
    case KernelFamily::QuadraticMatern: {
      const T s = eps * r;
      const T e = exp(-s);
      return {(3 + 3 * s + s * s) * e, -eps2 * (1 + s) * e, eps2 * eps2 * e};
    }
    case KernelFamily::Wendland2: {
      const T s = eps * r;
      if (s >= 1) return {0, 0, 0};
      const T l = wendland_index();
      const T c = (l + 1) * (l + 2) * (l + 3) * (l + 4);
      const T t = 1 - s;
      const T tl = pow(t, l);
      const T poly = (l * l + 4 * l + 3) * s * s + (3 * l + 6) * s + 3;
      const T value = c * tl * t * t * poly;
      const T g1 = -c * eps2 * (l + 3) * (l + 4) * tl * t * (1 + (l + 1) * s);
      const T g2 = c * eps2 * eps2 * (l + 1) * (l + 2) * (l + 3) * (l + 4) * tl;
      return {value, g1, g2};
    }
  }
  return {0, 0, 0};
}

template BasicRadialTerms<double> KernelSpec::radial_as<double>(double) const noexcept;
template BasicRadialTerms<long double> KernelSpec::radial_as<long double>(long double) const noexcept;

void KernelSpec::check_dims(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw InvalidInput("kernel expects points of dimension " + std::to_string(dim_) + ", got " +
                       std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
}

double KernelSpec::eval(const Vector& x, const Vector& y) const {
  check_dims(x, y);
  return radial((x - y).norm()).value;
}

Vector KernelSpec::grad1(const Vector& x, const Vector& y) const {
  check_dims(x, y);
  const Vector d = x - y;
  return radial(d.norm()).g1 * d;
}

Matrix KernelSpec::cross_hessian(const Vector& x, const Vector& y) const {
  check_dims(x, y);
  const Vector d = x - y;
  const RadialTerms t = radial(d.norm());
  Matrix h = d * d.transpose();
  h *= -t.g2;
  h.diagonal().array() -= t.g1;
  return h;
}

}  // namespace hktr
