#include "hktr/errors.hpp"
#include "hktr/problems.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <vector>

namespace hktr {
namespace {

using Triplet = Eigen::Triplet<double>;

bool in_interval(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string format_mu(const Vector& mu) {
  std::string out = "(";
  for (Eigen::Index m = 0; m < mu.size(); ++m) {
    if (m > 0) out += ", ";
    out += std::to_string(mu[m]);
  }
  return out + ")";
}

}  // namespace

Pde2dDiscretization::Pde2dDiscretization(int grid_n) : grid_n_(grid_n) {
  if (grid_n < 2) throw InvalidInput("PDE grid needs at least 2 cells per axis");
  const int n = grid_n_;
  const int inner = interior();
  const double h = spacing();

  // Cell coefficient of the omega indicator; cells outside the grid do not exist.
  auto chi = [&](int i, int j) { return cell_in_omega(i, j) ? 1.0 : 0.0; };
  auto index = [&](int i, int j) -> Eigen::Index {
    if (i < 1 || j < 1 || i > inner || j > inner) return -1;
    return static_cast<Eigen::Index>(i - 1) + static_cast<Eigen::Index>(j - 1) * inner;
  };

  std::vector<Triplet> t_out;
  std::vector<Triplet> t_in;
  auto add_edge = [&](int i0, int j0, int i1, int j1, double w_in) {
    // Each edge touches two cells; their half-weights sum to the edge coefficient.
    const double w_out = 1.0 - w_in;
    const Eigen::Index a = index(i0, j0);
    const Eigen::Index b = index(i1, j1);
    if (a >= 0) {
      t_out.emplace_back(a, a, w_out);
      t_in.emplace_back(a, a, w_in);
    }
    if (b >= 0) {
      t_out.emplace_back(b, b, w_out);
      t_in.emplace_back(b, b, w_in);
    }
    if (a >= 0 && b >= 0) {
      t_out.emplace_back(a, b, -w_out);
      t_out.emplace_back(b, a, -w_out);
      t_in.emplace_back(a, b, -w_in);
      t_in.emplace_back(b, a, -w_in);
    }
  };

  // Horizontal edges (i, j) -- (i + 1, j) between cells (i, j - 1) and (i, j).
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < n; ++i) add_edge(i, j, i + 1, j, 0.5 * (chi(i, j - 1) + chi(i, j)));
  }
  // Vertical edges (i, j) -- (i, j + 1) between cells (i - 1, j) and (i, j).
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < n; ++j) add_edge(i, j, i, j + 1, 0.5 * (chi(i - 1, j) + chi(i, j)));
  }

  const Eigen::Index size = unknowns();
  a1_.resize(size, size);
  a2_.resize(size, size);
  a1_.setFromTriplets(t_out.begin(), t_out.end());
  a2_.setFromTriplets(t_in.begin(), t_in.end());
  a1_.makeCompressed();
  a2_.makeCompressed();

  constexpr double pi = std::numbers::pi;
  load_.resize(size);
  for (int j = 1; j <= inner; ++j) {
    for (int i = 1; i <= inner; ++i) {
      const double x1 = -1.0 + i * h;
      const double x2 = -1.0 + j * h;
      load_[index(i, j)] = h * h * 0.5 * pi * pi * std::cos(0.5 * pi * x1) * std::cos(0.5 * pi * x2);
    }
  }
}

bool Pde2dDiscretization::cell_in_omega(int i, int j) const {
  const double h = spacing();
  const double cx = -1.0 + (i + 0.5) * h;
  const double cy = -1.0 + (j + 0.5) * h;
  constexpr double a = 1.0 / 3.0;
  constexpr double b = 2.0 / 3.0;
  return in_interval(cx, -b, -a) && (in_interval(cy, -b, -a) || in_interval(cy, a, b));
}

Pde2dDiscretization::SparseMatrix Pde2dDiscretization::system_matrix(const Vector& mu) const {
  return theta_outside(mu) * a1_ + theta_inside(mu) * a2_;
}

Box Pde2dDiscretization::parameter_box() { return Box::uniform(2, 0.5, std::numbers::pi); }

double Pde2dDiscretization::theta_outside(const Vector& mu) { return 1.1 + std::sin(mu[0]) * mu[1]; }

double Pde2dDiscretization::theta_inside(const Vector& mu) { return 1.1 + std::sin(mu[1]); }

double Pde2dDiscretization::theta_objective(const Vector& mu) { return 1.0 + (mu[0] + mu[1]) / 5.0; }

Pde2dSolver::Pde2dSolver(std::shared_ptr<const Pde2dDiscretization> disc) : disc_(std::move(disc)) {
  if (!disc_) throw InvalidInput("PDE solver needs a discretization");
}

PdeSolution Pde2dSolver::solve(const Vector& mu) {
  if (mu.size() != 2) throw InvalidInput("PDE problem expects two parameters");
  const auto a = disc_->system_matrix(mu);
  if (!analyzed_) {
    llt_.analyzePattern(a);
    analyzed_ = true;
  }
  llt_.factorize(a);
  if (llt_.info() != Eigen::Success) throw NumericalBreakdown("PDE system factorization failed at mu = " + format_mu(mu));
  Vector u = llt_.solve(disc_->load());
  if (llt_.info() != Eigen::Success || !u.allFinite()) {
    throw NumericalBreakdown("PDE solve failed at mu = " + format_mu(mu));
  }
  const double value = Pde2dDiscretization::theta_objective(mu) * disc_->load().dot(u);
  return {std::move(u), value};
}

Vector Pde2dSolver::gradient(const Vector& mu, const Vector& state) const {
  // The system is symmetric and the output functional equals the load, so the adjoint state is the
  // primal state: l(du/dmu_m) = -u^T (dA/dmu_m) u.
  const double s1 = state.dot(disc_->a_outside() * state);
  const double s2 = state.dot(disc_->a_inside() * state);
  const double compliance = disc_->load().dot(state);
  const double theta_j = Pde2dDiscretization::theta_objective(mu);

  const double dtheta1_dmu1 = std::cos(mu[0]) * mu[1];
  const double dtheta1_dmu2 = std::sin(mu[0]);
  const double dtheta2_dmu2 = std::cos(mu[1]);

  Vector g(2);
  g[0] = 0.2 * compliance - theta_j * dtheta1_dmu1 * s1;
  g[1] = 0.2 * compliance - theta_j * (dtheta1_dmu2 * s1 + dtheta2_dmu2 * s2);
  return g;
}

PdeSolution pde2d_solve(const Pde2dDiscretization& disc, const Vector& mu) {
  Pde2dSolver solver(std::shared_ptr<const Pde2dDiscretization>(&disc, [](const Pde2dDiscretization*) {}));
  return solver.solve(mu);
}

Vector pde2d_gradient(const Pde2dDiscretization& disc, const Vector& mu, const Vector& state) {
  Pde2dSolver solver(std::shared_ptr<const Pde2dDiscretization>(&disc, [](const Pde2dDiscretization*) {}));
  return solver.gradient(mu, state);
}

void write_state_csv(const Pde2dDiscretization& disc, const Vector& state, std::ostream& os) {
  if (state.size() != disc.unknowns()) throw InvalidInput("state size does not match discretization");
  const int n = disc.grid_n();
  const int inner = disc.interior();
  const double h = disc.spacing();
  os << "x1,x2,u\n" << std::setprecision(17);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const bool boundary = i == 0 || j == 0 || i == n || j == n;
      const double u = boundary ? 0.0 : state[(i - 1) + static_cast<Eigen::Index>(j - 1) * inner];
      os << -1.0 + i * h << ',' << -1.0 + j * h << ',' << u << '\n';
    }
  }
}

Pde2dProblem::Pde2dProblem(std::shared_ptr<const Pde2dDiscretization> disc) : solver_(std::move(disc)) {}

Pde2dProblem::Pde2dProblem(int grid_n) : solver_(std::make_shared<const Pde2dDiscretization>(grid_n)) {}

ObjectiveValue Pde2dProblem::do_evaluate(const Vector& x) {
  PdeSolution sol = solver_.solve(x);
  if (!(sol.value > 0.0)) throw AssumptionViolation("PDE objective is not positive at mu = " + format_mu(x));
  return {sol.value, solver_.gradient(x, sol.state)};
}

}  // namespace hktr
