#include "hktr/surrogate.hpp"

#include "hktr/errors.hpp"
#include "hktr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace hktr {

double distinctness_threshold(const Vector& x) { return 1e-10 * (1.0 + x.norm()); }

void TrainingSet::add(Vector point, double value, Vector gradient) {
  points.push_back(std::move(point));
  values.push_back(value);
  gradients.push_back(std::move(gradient));
}

std::optional<std::size_t> TrainingSet::find_near(const Vector& x) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if ((points[i] - x).norm() <= distinctness_threshold(x)) return i;
  }
  return std::nullopt;
}

void TrainingSet::validate() const {
  if (points.empty()) throw InvalidInput("training set is empty");
  if (values.size() != points.size() || gradients.size() != points.size()) {
    throw InvalidInput("training set has mismatched numbers of points, values and gradients");
  }
  const auto p = points.front().size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != p || gradients[i].size() != p) {
      throw InvalidInput("training point " + std::to_string(i) + " has inconsistent dimension");
    }
    if (!points[i].allFinite() || !std::isfinite(values[i]) || !gradients[i].allFinite()) {
      throw InvalidInput("training datum " + std::to_string(i) + " is not finite");
    }
  }
}

namespace {

void check_distinct(const KernelSpec& kernel, std::span<const Vector> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != kernel.dim()) throw InvalidInput("point " + std::to_string(i) + " has wrong dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if ((points[i] - points[j]).norm() <= distinctness_threshold(points[i])) {
        throw InvalidInput("points " + std::to_string(j) + " and " + std::to_string(i) + " are not distinct");
      }
    }
  }
}

template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> gram_as(const KernelSpec& kernel, std::span<const Vector> points) {
  using V = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  const auto n = static_cast<Eigen::Index>(points.size());
  const Eigen::Index p = kernel.dim();
  const Eigen::Index size = n * (p + 1);
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> m(size, size);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const V d = points[i].cast<T>() - points[j].cast<T>();
      const auto t = kernel.radial_as<T>(d.norm());
      m(i, j) = t.value;
      for (Eigen::Index l = 0; l < p; ++l) {
        // <k(x_i,.), d_1^l k(x_j,.)> = d_1^l k(x_j, x_i) and its mirror.
        m(i, n + j * p + l) = -t.g1 * d[l];
        m(j, n + i * p + l) = t.g1 * d[l];
        for (Eigen::Index q = 0; q < p; ++q) {
          m(n + i * p + l, n + j * p + q) = -t.g2 * d[l] * d[q] - (l == q ? t.g1 : T(0));
        }
      }
    }
  }
  // Every upper-triangle entry is set above; mirror it so the result is exactly symmetric.
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < r; ++c) m(r, c) = m(c, r);
  }
  return m;
}

}  // namespace

Matrix assemble_gram(const KernelSpec& kernel, std::span<const Vector> points) {
  check_distinct(kernel, points);
  return gram_as<double>(kernel, points);
}

Surrogate Surrogate::fit(const KernelSpec& kernel, TrainingSet training, double norm_bound) {
  training.validate();
  if (training.dim() != kernel.dim()) throw InvalidInput("training dimension does not match kernel dimension");
  if (!(norm_bound > 0.0) || !std::isfinite(norm_bound)) throw InvalidInput("norm bound must be positive and finite");

  Surrogate s(kernel, std::move(training));
  s.norm_bound_ = norm_bound;
  check_distinct(kernel, s.training_.points);
  s.gram_ext_ = gram_as<Real>(kernel, s.training_.points);
  s.gram_ = s.gram_ext_.cast<double>();

  const auto n = static_cast<Eigen::Index>(s.training_.size());
  const Eigen::Index p = kernel.dim();
  RealVector rhs(n * (p + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs[i] = s.training_.values[i];
    rhs.segment(n + i * p, p) = s.training_.gradients[i].cast<Real>();
  }

  const Real scale = s.gram_ext_.diagonal().mean();
  bool ok = false;
  for (double jitter : kJitterLadder) {
    RealMatrix regularized = s.gram_ext_;
    regularized.diagonal().array() += static_cast<Real>(jitter) * scale;
    s.factor_.compute(regularized);
    if (s.factor_.info() == Eigen::Success && s.factor_.matrixLLT().diagonal().allFinite() &&
        (s.factor_.matrixLLT().diagonal().array() > 0).all()) {
      s.jitter_ = jitter;
      ok = true;
      break;
    }
  }
  if (!ok) throw IllConditionedGram(kJitterLadder[std::size(kJitterLadder) - 1], static_cast<std::size_t>(n));

  s.coefficients_ = s.factor_.solve(rhs);
  if (!s.coefficients_.allFinite()) throw IllConditionedGram(s.jitter_, static_cast<std::size_t>(n));
  const Vector c = s.coefficients_.cast<double>();
  s.alpha_ = c.head(n);
  s.beta_ = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(c.data() + n, n, p);
  return s;
}

Surrogate Surrogate::with_norm_bound(double norm_bound) const {
  if (!(norm_bound > 0.0) || !std::isfinite(norm_bound)) throw InvalidInput("norm bound must be positive and finite");
  Surrogate copy = *this;
  copy.norm_bound_ = norm_bound;
  return copy;
}

Surrogate::RealVector Surrogate::basis(const Vector& x) const {
  const auto n = static_cast<Eigen::Index>(training_.size());
  const Eigen::Index p = kernel_.dim();
  RealVector b(n * (p + 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    const RealVector d = training_.points[j].cast<Real>() - x.cast<Real>();
    const auto t = kernel_.radial_as<Real>(d.norm());
    b[j] = t.value;
    b.segment(n + j * p, p) = t.g1 * d;
  }
  return b;
}

Surrogate::RealMatrix Surrogate::basis_jacobian(const Vector& x) const {
  const auto n = static_cast<Eigen::Index>(training_.size());
  const Eigen::Index p = kernel_.dim();
  RealMatrix jac(n * (p + 1), p);
  for (Eigen::Index j = 0; j < n; ++j) {
    const RealVector d = training_.points[j].cast<Real>() - x.cast<Real>();
    const auto t = kernel_.radial_as<Real>(d.norm());
    jac.row(j) = -t.g1 * d.transpose();
    RealMatrix block = -t.g2 * d * d.transpose();
    block.diagonal().array() -= t.g1;
    jac.block(n + j * p, 0, p, p) = block;
  }
  return jac;
}

Evaluation Surrogate::evaluate(const Vector& x) const {
  if (x.size() != kernel_.dim()) throw InvalidInput("evaluation point has wrong dimension");
  const RealVector g = basis_jacobian(x).transpose() * coefficients_;
  return {static_cast<double>(basis(x).dot(coefficients_)), g.cast<double>()};
}

double Surrogate::value(const Vector& x) const {
  if (x.size() != kernel_.dim()) throw InvalidInput("evaluation point has wrong dimension");
  return static_cast<double>(basis(x).dot(coefficients_));
}

double Surrogate::residual_norm(Real diag, const RealVector& b) const {
  const RealVector z = factor_.matrixL().solve(b);
  // The subtraction cancels near the centers; never report less than its rounding error, so the
  // error bounds stay conservative there.
  const Real floor = std::numeric_limits<Real>::epsilon() * diag * static_cast<Real>(b.size());
  return static_cast<double>(std::sqrt(std::max(diag - z.squaredNorm(), floor)));
}

double Surrogate::power(const Vector& x) const {
  if (x.size() != kernel_.dim()) throw InvalidInput("evaluation point has wrong dimension");
  return residual_norm(kernel_.radial_as<Real>(0).value, basis(x));
}

double Surrogate::power(const Vector& x, int direction) const {
  if (x.size() != kernel_.dim()) throw InvalidInput("evaluation point has wrong dimension");
  if (direction < 0 || direction >= kernel_.dim()) throw InvalidInput("power direction out of range");
  return residual_norm(-kernel_.radial_as<Real>(0).g1, basis_jacobian(x).col(direction));
}

ErrorBounds Surrogate::error_bounds(const Vector& x) const {
  if (x.size() != kernel_.dim()) throw InvalidInput("evaluation point has wrong dimension");
  const RealMatrix jac = basis_jacobian(x);
  const Real diag_grad = -kernel_.radial_as<Real>(0).g1;
  double sum_sq = 0.0;
  for (Eigen::Index m = 0; m < jac.cols(); ++m) {
    const double pm = residual_norm(diag_grad, jac.col(m));
    sum_sq += pm * pm;
  }
  return {norm_bound_ * residual_norm(kernel_.radial_as<Real>(0).value, basis(x)), norm_bound_ * std::sqrt(sum_sq)};
}

double Surrogate::rkhs_norm() const {
  const double q = static_cast<double>(coefficients_.dot(gram_ext_ * coefficients_));
  if (q < -1e-10) throw NumericalBreakdown("negative RKHS quadratic form " + std::to_string(q));
  return std::sqrt(std::max(0.0, q));
}

void Surrogate::dump(std::ostream& os) const {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  os << "kernel " << to_string(kernel_.family()) << " shape " << kernel_.shape() << " dim " << kernel_.dim() << '\n';
  os << "norm_bound " << norm_bound_ << '\n';
  os << "jitter_used " << jitter_ << '\n';
  os << "centers " << training_.size() << '\n';
  for (std::size_t i = 0; i < training_.size(); ++i) {
    os << "center";
    for (double v : training_.points[i]) os << ' ' << v;
    os << " alpha " << alpha_[static_cast<Eigen::Index>(i)] << " beta";
    for (double v : beta_.row(static_cast<Eigen::Index>(i))) os << ' ' << v;
    os << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

double estimate_norm(const KernelSpec& kernel, Problem& problem, int n_samples, std::uint64_t sampler_seed,
                     double safety) {
  if (n_samples < 1) throw InvalidInput("norm estimation needs at least one sample");
  if (!(safety >= 1.0)) throw InvalidInput("norm safety factor must be >= 1");
  const Box box = problem.box().with_default_bounds(-2.0, 2.0);

  UniformSampler sampler(sampler_seed);
  TrainingSet data;
  for (int k = 0; k < n_samples; ++k) {
    Vector x = sampler.point(box);
    if (data.find_near(x)) continue;
    ObjectiveValue obj = problem.evaluate(x);
    data.add(std::move(x), obj.value, std::move(obj.gradient));
  }
  return safety * Surrogate::fit(kernel, std::move(data), 1.0).rkhs_norm();
}

double analytic_norm_1d_gaussian(double eps) {
  const double eps2 = eps * eps;
  if (!(eps2 > 0.5)) throw DomainError("RKHS norm divergent for this shape parameter (need eps^2 > 1/2)");
  // Fourier transforms: F[exp(-mu^2)] = a exp(-w^2/4), F[3 exp(-0.001 mu^2)] = b exp(-250 w^2),
  // F[exp(-eps^2 r^2)] = exp(-w^2 / (4 eps^2)) / sqrt(2 eps^2).
  const double a = 1.0 / std::sqrt(2.0);
  const double b = 3.0 / std::sqrt(0.002);
  const double sq = 2.0 * eps2 *
                    (a * a / std::sqrt(2.0 * eps2 - 1.0) - 2.0 * a * b / std::sqrt(1001.0 * eps2 - 1.0) +
                     b * b / std::sqrt(2000.0 * eps2 - 1.0));
  return std::sqrt(sq);
}

}  // namespace hktr
