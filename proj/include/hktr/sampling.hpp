#pragma once

#include "hktr/types.hpp"

#include <cstdint>
#include <random>

namespace hktr {

/// Seeded uniform sampler whose stream is identical across standard libraries
/// (the engine is fully specified and the real conversion is done by hand).
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Vector point(const Box& box) {
    Vector x(box.dim());
    for (int m = 0; m < box.dim(); ++m) x[m] = uniform(box.lower[m], box.upper[m]);
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hktr
