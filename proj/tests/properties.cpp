#include "properties.hpp"

#include "hktr/problems.hpp"
#include "hktr/sampling.hpp"
#include "hktr/surrogate.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace hktr::props {
namespace {

constexpr KernelFamily kFamilies[] = {KernelFamily::Gaussian, KernelFamily::QuadraticMatern, KernelFamily::Wendland2};

// Shape parameters keep the Hermite Gram matrices of well-separated points comfortably invertible.
double shape_for(KernelFamily f, UniformSampler& rng) {
  switch (f) {
    case KernelFamily::Gaussian: return rng.uniform(1.0, 3.0);
    case KernelFamily::QuadraticMatern: return rng.uniform(1.0, 4.0);
    case KernelFamily::Wendland2: return rng.uniform(0.3, 0.6);
  }
  return 1.0;
}

TrainingSet kernel_expansion_data(const KernelSpec& k, const std::vector<Vector>& z, const Vector& c,
                                  const std::vector<Vector>& at) {
  TrainingSet t;
  for (const auto& x : at) {
    double v = 0.0;
    Vector g = Vector::Zero(x.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
      v += c[j] * k.eval(x, z[j]);
      g += c[j] * k.grad1(x, z[j]);
    }
    t.add(x, v, g);
  }
  return t;
}

std::string describe(const char* what, double lhs, double rhs) {
  std::ostringstream os;
  os << what << ": " << lhs << " > " << rhs;
  return os.str();
}

}  // namespace

void Tally::check(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    ++violations;
    if (notes.size() < 5) notes.push_back(what);
  }
}

Tally& Tally::operator+=(const Tally& other) {
  checks += other.checks;
  violations += other.violations;
  for (const auto& n : other.notes) {
    if (notes.size() < 5) notes.push_back(n);
  }
  return *this;
}

Tally exactness_suite(int instances, std::uint64_t seed) {
  Tally t;
  UniformSampler rng(seed);
  for (int inst = 0; inst < instances; ++inst) {
    const auto fam = kFamilies[inst % 3];
    const int dim = 1 + inst % 3;
    const int n = 1 + static_cast<int>(rng.unit() * 8);
    const KernelSpec k(fam, shape_for(fam, rng), dim);
    const double half = dim == 1 ? 2.0 : 1.0;
    const auto pts = test::random_points(rng, n, dim, -half, half, 0.25);

    TrainingSet data;
    for (const auto& x : pts) {
      Vector g(dim);
      for (int m = 0; m < dim; ++m) g[m] = rng.uniform(-2, 2);
      data.add(x, rng.uniform(-3, 3), g);
    }
    const Surrogate s = Surrogate::fit(k, data, 1.0);
    const std::string where = " [" + std::string(to_string(fam)) + " shape " + std::to_string(k.shape()) +
                              " dim " + std::to_string(dim) + " n " + std::to_string(n) + " jitter " +
                              describe("", s.jitter_used(), 0).substr(2) + "]";
    for (int i = 0; i < n; ++i) {
      const Evaluation e = s.evaluate(pts[i]);
      t.check(std::abs(e.value - data.values[i]) <= 1e-8 * (1 + std::abs(data.values[i])),
              describe("value interpolation", std::abs(e.value - data.values[i]), 1e-8) + where);
      t.check((e.gradient - data.gradients[i]).norm() <= 1e-6 * (1 + data.gradients[i].norm()),
              describe("gradient interpolation", (e.gradient - data.gradients[i]).norm(), 1e-6) + where);
    }
    const Matrix g = assemble_gram(k, pts);
    t.check((g - g.transpose()).norm() == 0.0, "Gram matrix not symmetric");
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff();
    t.check(lmin > 0.0, describe("Gram eigenvalue", 0.0, lmin));
    t.check(s.rkhs_norm() >= 0.0, "negative RKHS norm");
  }
  return t;
}

Tally error_bound_suite(int instances, int points_per_instance, std::uint64_t seed) {
  Tally t;
  UniformSampler rng(seed);
  for (int inst = 0; inst < instances; ++inst) {
    const auto fam = kFamilies[inst % 3];
    const int dim = 1 + inst % 2;
    const KernelSpec k(fam, shape_for(fam, rng), dim);
    const auto z = test::random_points(rng, 5, dim, -1, 1, 0.25);
    Vector c(5);
    for (int j = 0; j < 5; ++j) c[j] = rng.uniform(-1, 1);
    Matrix plain(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) plain(i, j) = k.eval(z[i], z[j]);
    const double norm = std::sqrt(c.dot(plain * c));

    const std::vector<Vector> centers(z.begin(), z.begin() + 3);
    const Surrogate s = Surrogate::fit(k, kernel_expansion_data(k, z, c, centers), norm);
    for (int q = 0; q < points_per_instance; ++q) {
      const Vector x = rng.point(Box::uniform(dim, -1.5, 1.5));
      const TrainingSet truth = kernel_expansion_data(k, z, c, {x});
      const Evaluation e = s.evaluate(x);
      const ErrorBounds b = s.error_bounds(x);
      const double slack = 1e-10 * (1 + norm);
      const double ev = std::abs(truth.values[0] - e.value);
      const double eg = (truth.gradients[0] - e.gradient).norm();
      t.check(ev <= b.value_bound + slack, describe("value error bound", ev, b.value_bound));
      t.check(eg <= b.gradient_bound + slack, describe("gradient error bound", eg, b.gradient_bound));
    }
  }
  return t;
}

double kernel_lipschitz(const KernelSpec& k) {
  // |d/dr psi| = |g1| r.
  const double r_max = 10.0 / k.shape();
  double best = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double r = r_max * i / 200000.0;
    best = std::max(best, std::abs(k.radial(r).g1) * r);
  }
  return best * 1.001;
}

double mixed_derivative_lipschitz(const KernelSpec& k) {
  // h_l(d) = d_1^l d_2^l k = -g2 d_l^2 - g1 with d = x - y; sample ||grad_d h_l|| on rays.
  const double r_max = 10.0 / k.shape();
  const int dim = k.dim();
  auto h = [&](const Vector& d, int l) {
    const RadialTerms t = k.radial(d.norm());
    return -t.g2 * d[l] * d[l] - t.g1;
  };
  double best = 0.0;
  UniformSampler rng(99);
  for (int ray = 0; ray < 64; ++ray) {
    Vector u(dim);
    for (int m = 0; m < dim; ++m) u[m] = rng.uniform(-1, 1);
    if (ray < dim) u = Vector::Unit(dim, ray);
    u.normalize();
    for (int i = 1; i <= 4000; ++i) {
      const Vector d = (r_max * i / 4000.0) * u;
      for (int l = 0; l < dim; ++l) {
        best = std::max(best, test::fd_gradient([&](const Vector& e) { return h(e, l); }, d, 1e-6 / k.shape()).norm());
      }
    }
  }
  return best * 1.01;
}

Tally power_suite(int pairs, std::uint64_t seed) {
  Tally t;
  UniformSampler rng(seed);
  for (auto fam : kFamilies) {
    for (int dim : {1, 2}) {
      const KernelSpec k(fam, fam == KernelFamily::Wendland2 ? 0.5 : 1.5, dim);
      const double k0 = k.diagonal();
      const auto pts = test::random_points(rng, 6, dim, -1, 1, 0.3);
      TrainingSet data;
      for (const auto& x : pts) data.add(x, 0.0, Vector::Zero(dim));
      const Surrogate s = Surrogate::fit(k, data, 1.0);

      for (const auto& x : pts) t.check(s.power(x) <= 1e-6 * std::sqrt(k0), describe("power at center", s.power(x), 0));

      // Nested center sets.
      std::vector<Surrogate> nested;
      for (int m = 1; m <= 6; ++m) {
        TrainingSet sub;
        for (int i = 0; i < m; ++i) sub.add(pts[i], 0.0, Vector::Zero(dim));
        nested.push_back(Surrogate::fit(k, sub, 1.0));
      }
      UniformSampler probes(seed + 1);
      for (int q = 0; q < 100; ++q) {
        const Vector x = probes.point(Box::uniform(dim, -1.5, 1.5));
        const double p = s.power(x);
        t.check(p >= 0.0 && p <= std::sqrt(k0) * (1 + 1e-12), describe("power range", p, std::sqrt(k0)));
        for (std::size_t m = 1; m < nested.size(); ++m) {
          const double before = nested[m - 1].power(x), after = nested[m].power(x);
          t.check(after <= before + 1e-7 * std::sqrt(k0), describe("power monotonicity", after, before));
        }
      }

      const double ck = kernel_lipschitz(k);
      for (int q = 0; q < pairs; ++q) {
        const Vector x = rng.point(Box::uniform(dim, -1.5, 1.5));
        Vector y = rng.point(Box::uniform(dim, -1.5, 1.5));
        if (q % 2) y = x + 1e-3 * (y - x);
        const double lhs = std::abs(s.power(x) - s.power(y));
        const double rhs = 4 * std::sqrt(ck) * std::sqrt((x - y).norm());
        t.check(lhs <= rhs, describe("Hoelder bound", lhs, rhs));
      }
    }
  }
  return t;
}

Tally lipschitz_suite(int pairs, std::uint64_t seed) {
  Tally t;
  UniformSampler rng(seed);
  const std::pair<KernelFamily, double> cases[] = {
      {KernelFamily::Gaussian, 1.0}, {KernelFamily::QuadraticMatern, 1.5}, {KernelFamily::Wendland2, 0.5}};
  for (auto [fam, eps] : cases) {
    for (int dim : {1, 2}) {
      const KernelSpec k(fam, eps, dim);
      const auto pts = test::random_points(rng, 6, dim, -1, 1, 0.3);
      TrainingSet data;
      for (const auto& x : pts) {
        Vector g(dim);
        for (int m = 0; m < dim; ++m) g[m] = std::cos(3 * x[m]);
        data.add(x, std::sin(x.sum()), g);
      }
      const Surrogate s = Surrogate::fit(k, data, 1.0);
      const double bound = 2 * mixed_derivative_lipschitz(k) * std::sqrt(double(dim)) * s.rkhs_norm();
      for (int q = 0; q < pairs / 6; ++q) {
        const Vector x = rng.point(Box::uniform(dim, -1.5, 1.5));
        Vector y = rng.point(Box::uniform(dim, -1.5, 1.5));
        if (q % 2) y = x + 1e-3 * (y - x);
        const double ratio = (s.evaluate(x).gradient - s.evaluate(y).gradient).norm() / (x - y).norm();
        t.check(ratio <= bound, describe("gradient Lipschitz ratio", ratio, bound));
      }
    }
  }
  return t;
}

Tally finite_difference_suite(std::uint64_t seed) {
  Tally t;
  UniformSampler rng(seed);
  for (auto fam : kFamilies) {
    const KernelSpec k(fam, fam == KernelFamily::Wendland2 ? 0.6 : 1.3, 2);
    for (int q = 0; q < 100; ++q) {
      const Vector x = rng.point(Box::uniform(2, -0.6, 0.6)), y = rng.point(Box::uniform(2, -0.6, 0.6));
      const Vector fd = test::fd_gradient([&](const Vector& z) { return k.eval(z, y); }, x);
      t.check(test::rel_err(k.grad1(x, y), fd) <= 1e-6, describe("kernel gradient", test::rel_err(k.grad1(x, y), fd), 1e-6));
      Matrix fdh(2, 2);
      for (int j = 0; j < 2; ++j) {
        Vector yp = y, ym = y;
        yp[j] += 1e-5;
        ym[j] -= 1e-5;
        fdh.col(j) = (k.grad1(x, yp) - k.grad1(x, ym)) / 2e-5;
      }
      const double eh = (k.cross_hessian(x, y) - fdh).norm() / std::max(1.0, fdh.norm());
      t.check(eh <= 1e-4, describe("kernel cross Hessian", eh, 1e-4));
    }

    const auto pts = test::random_points(rng, 5, 2, -1, 1, 0.3);
    TrainingSet data;
    for (const auto& x : pts) data.add(x, std::exp(x[0]) * std::cos(x[1]), Vector::Constant(2, 0.3));
    const Surrogate s = Surrogate::fit(k, data, 1.0);
    for (int q = 0; q < 100; ++q) {
      const Vector x = rng.point(Box::uniform(2, -1.2, 1.2));
      const Vector fd = test::fd_gradient([&](const Vector& z) { return s.value(z); }, x, 1e-5);
      const double e = (s.evaluate(x).gradient - fd).norm() / std::max(1.0, fd.norm());
      t.check(e <= 1e-5, describe("surrogate gradient", e, 1e-5));
    }
  }

  auto check_problem = [&](Problem& p, const Box& box, int count, double h, double tol) {
    for (int q = 0; q < count; ++q) {
      const Vector x = rng.point(box);
      const Vector fd = test::fd_gradient([&](const Vector& z) { return p.evaluate(z).value; }, x, h);
      const double e = (p.evaluate(x).gradient - fd).norm() / std::max(1.0, fd.norm());
      t.check(e <= tol, describe((p.name() + " gradient").c_str(), e, tol));
    }
  };
  auto oned = problem_1d();
  check_problem(*oned, oned->box(), 50, 1e-5, 1e-8);
  auto rosen = problem_rosenbrock();
  check_problem(*rosen, Box::uniform(2, -2, 2), 50, 1e-6, 1e-8);
  auto pde = problem_pde2d(48);
  const Box inner{pde->box().lower.array() + 1e-3, pde->box().upper.array() - 1e-3};
  check_problem(*pde, inner, 10, 1e-5, 1e-5);
  return t;
}

double oned_fourier_by_quadrature(double w) {
  // J is even, so its transform is (2/sqrt(2 pi)) * int_0^inf J(x) cos(w x) dx. The slowly decaying
  // component needs a long interval; both pieces are negligible beyond x = 400.
  using boost::math::quadrature::gauss_kronrod;
  const double pi = boost::math::constants::pi<double>();
  auto integrand = [w](double x) { return (-std::exp(-x * x) + 3 * std::exp(-0.001 * x * x)) * std::cos(w * x); };
  double sum = 0.0;
  for (int seg = 0; seg < 40; ++seg) {
    sum += gauss_kronrod<double, 61>::integrate(integrand, 10.0 * seg, 10.0 * (seg + 1), 15, 1e-14);
  }
  return 2.0 * sum / std::sqrt(2 * pi);
}

double oned_norm_by_quadrature(double eps) {
  using boost::math::quadrature::exp_sinh;
  const double pi = boost::math::constants::pi<double>();
  // Standard unitary transform of exp(-c x^2) is exp(-w^2 / (4c)) / sqrt(2c). Each product of two
  // transforms divided by a third is a single Gaussian in w, which avoids 0/0 in the tail.
  auto ratio = [&](double w, double a, double b) {
    const double c = eps * eps;
    return std::exp(-w * w * (1 / (4 * a) + 1 / (4 * b) - 1 / (4 * c))) * std::sqrt(2 * c) /
           std::sqrt(4 * a * b);
  };
  auto integrand = [&](double w) {
    return ratio(w, 1.0, 1.0) - 6 * ratio(w, 1.0, 0.001) + 9 * ratio(w, 0.001, 0.001);
  };
  // Even integrand; the narrow peak at the origin is handled by Gauss-Kronrod, the tail by exp-sinh.
  using boost::math::quadrature::gauss_kronrod;
  const double head = gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 20, 1e-14);
  const double tail = exp_sinh<double>().integrate(integrand, 1.0, std::numeric_limits<double>::infinity(), 1e-13);
  const double half = head + tail;
  return std::sqrt(2 * half / std::sqrt(2 * pi));
}

}  // namespace hktr::props
