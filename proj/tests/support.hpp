#pragma once

#include "hktr/sampling.hpp"
#include "hktr/types.hpp"

#include <functional>
#include <vector>

namespace hktr::test {

inline std::vector<Vector> random_points(UniformSampler& rng, int n, int dim, double lo = -1.0, double hi = 1.0,
                                         double min_sep = 0.05) {
  const Box box = Box::uniform(dim, lo, hi);
  std::vector<Vector> pts;
  int misses = 0;
  while (static_cast<int>(pts.size()) < n) {
    Vector x = rng.point(box);
    bool ok = true;
    for (const auto& p : pts) ok = ok && (p - x).norm() >= min_sep;
    if (ok) {
      pts.push_back(std::move(x));
    } else if (++misses > 1000) {
      // Jammed configuration: start over.
      pts.clear();
      misses = 0;
    }
  }
  return pts;
}

/// Central differences of a scalar function.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index m = 0; m < x.size(); ++m) {
    Vector xp = x, xm = x;
    xp[m] += h;
    xm[m] -= h;
    g[m] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

inline double rel_err(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace hktr::test
