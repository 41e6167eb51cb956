#include "hktr/problems.hpp"

#include "hktr/errors.hpp"

#include <cmath>

namespace hktr {

ObjectiveValue OneDProblem::do_evaluate(const Vector& x) {
  if (x.size() != 1) throw InvalidInput("1D problem expects a scalar parameter");
  const double mu = x[0];
  const double narrow = std::exp(-mu * mu);
  const double wide = std::exp(-0.001 * mu * mu);
  Vector g(1);
  g[0] = 2.0 * mu * narrow - 0.006 * mu * wide;
  return {-narrow + 3.0 * wide, std::move(g)};
}

ObjectiveValue RosenbrockProblem::do_evaluate(const Vector& x) {
  if (x.size() != 2) throw InvalidInput("Rosenbrock problem expects two parameters");
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  Vector g(2);
  g[0] = -2.0 * a - 400.0 * x[0] * b;
  g[1] = 200.0 * b;
  return {a * a + 100.0 * b * b + 1.0, std::move(g)};
}

std::unique_ptr<Problem> problem_1d() { return std::make_unique<OneDProblem>(); }

std::unique_ptr<Problem> problem_rosenbrock() { return std::make_unique<RosenbrockProblem>(); }

std::unique_ptr<Problem> problem_pde2d(int grid_n) { return std::make_unique<Pde2dProblem>(grid_n); }

}  // namespace hktr
