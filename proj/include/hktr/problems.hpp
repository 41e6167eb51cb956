#pragma once

#include "hktr/problem.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <memory>

namespace hktr {

/// J(mu) = -exp(-mu^2) + 3 exp(-0.001 mu^2) on [-2, 2]; minimum J(0) = 2.
class OneDProblem final : public Problem {
 public:
  int dim() const override { return 1; }
  Box box() const override { return Box::uniform(1, -2.0, 2.0); }
  std::string name() const override { return "oned"; }

 protected:
  ObjectiveValue do_evaluate(const Vector& x) override;
};

/// Rosenbrock function shifted by +1 so that it stays positive; unbounded box, minimum 1 at (1, 1).
class RosenbrockProblem final : public Problem {
 public:
  int dim() const override { return 2; }
  Box box() const override { return Box::unbounded(2); }
  std::string name() const override { return "rosenbrock"; }

 protected:
  ObjectiveValue do_evaluate(const Vector& x) override;
};

/// Finite-element discretization of
///   -div(lambda(x; mu) grad u) = l   in (-1, 1)^2,   u = 0 on the boundary,
/// with lambda = theta_1(mu) * 1_{X \ omega} + theta_2(mu) * 1_omega and
/// l = (pi^2 / 2) cos(pi x_1 / 2) cos(pi x_2 / 2).
///
/// Piecewise-linear elements on a uniform right-triangle mesh with cellwise constant coefficients;
/// this yields a 5-point stencil whose edge weights are the mean of the two adjacent cell coefficients,
/// so A(mu) = theta_1 A_1 + theta_2 A_2 holds exactly. The load uses vertex (lumped) quadrature.
/// Immutable after construction.
class Pde2dDiscretization {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double>;

  explicit Pde2dDiscretization(int grid_n = 96);

  int grid_n() const noexcept { return grid_n_; }
  /// Interior vertices per axis.
  int interior() const noexcept { return grid_n_ - 1; }
  Eigen::Index unknowns() const noexcept { return static_cast<Eigen::Index>(interior()) * interior(); }
  double spacing() const noexcept { return 2.0 / grid_n_; }

  const SparseMatrix& a_outside() const noexcept { return a1_; }
  const SparseMatrix& a_inside() const noexcept { return a2_; }
  const Vector& load() const noexcept { return load_; }

  /// Whether the cell with lower-left vertex index (i, j) lies in omega (by its center).
  bool cell_in_omega(int i, int j) const;

  SparseMatrix system_matrix(const Vector& mu) const;

  static Box parameter_box();
  static double theta_outside(const Vector& mu);
  static double theta_inside(const Vector& mu);
  static double theta_objective(const Vector& mu);

 private:
  int grid_n_;
  SparseMatrix a1_;
  SparseMatrix a2_;
  Vector load_;
};

struct PdeSolution {
  Vector state;
  double value;
};

/// Per-instance solver; reuses the symbolic factorization across parameters.
class Pde2dSolver {
 public:
  explicit Pde2dSolver(std::shared_ptr<const Pde2dDiscretization> disc);

  PdeSolution solve(const Vector& mu);
  /// dJ/dmu for a state that solves the system at mu.
  Vector gradient(const Vector& mu, const Vector& state) const;

  const Pde2dDiscretization& discretization() const noexcept { return *disc_; }

 private:
  std::shared_ptr<const Pde2dDiscretization> disc_;
  Eigen::SimplicialLLT<Pde2dDiscretization::SparseMatrix> llt_;
  bool analyzed_ = false;
};

PdeSolution pde2d_solve(const Pde2dDiscretization& disc, const Vector& mu);
Vector pde2d_gradient(const Pde2dDiscretization& disc, const Vector& mu, const Vector& state);

/// Writes the state (with boundary zeros) as CSV rows "x1,x2,u".
void write_state_csv(const Pde2dDiscretization& disc, const Vector& state, std::ostream& os);

/// J(mu) = theta_J(mu) * l(u(mu)) on [0.5, pi]^2.
class Pde2dProblem final : public Problem {
 public:
  explicit Pde2dProblem(std::shared_ptr<const Pde2dDiscretization> disc);
  explicit Pde2dProblem(int grid_n = 96);

  int dim() const override { return 2; }
  Box box() const override { return Pde2dDiscretization::parameter_box(); }
  std::string name() const override { return "pde2d"; }

  const Pde2dDiscretization& discretization() const noexcept { return solver_.discretization(); }

 protected:
  ObjectiveValue do_evaluate(const Vector& x) override;

 private:
  Pde2dSolver solver_;
};

std::unique_ptr<Problem> problem_1d();
std::unique_ptr<Problem> problem_rosenbrock();
std::unique_ptr<Problem> problem_pde2d(int grid_n = 96);

}  // namespace hktr
