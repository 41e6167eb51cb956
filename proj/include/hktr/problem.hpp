#pragma once

#include "hktr/types.hpp"

#include <cstddef>
#include <functional>
#include <string>

namespace hktr {

struct ObjectiveValue {
  double value;
  Vector gradient;
};

/// Expensive objective ("full order model") with box bounds and an evaluation counter.
///
/// Every call to evaluate() counts as exactly one FOM evaluation of (J, grad J).
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int dim() const = 0;
  virtual Box box() const = 0;
  virtual std::string name() const = 0;

  ObjectiveValue evaluate(const Vector& x) {
    ++evaluations_;
    return do_evaluate(x);
  }

  std::size_t evaluations() const noexcept { return evaluations_; }
  void reset_evaluations() noexcept { evaluations_ = 0; }

 protected:
  virtual ObjectiveValue do_evaluate(const Vector& x) = 0;

 private:
  std::size_t evaluations_ = 0;
};

/// Problem backed by a callable; used for synthetic objectives.
class FunctionProblem final : public Problem {
 public:
  using Fn = std::function<ObjectiveValue(const Vector&)>;

  FunctionProblem(std::string name, Box box, Fn fn) : name_(std::move(name)), box_(std::move(box)), fn_(std::move(fn)) {}

  int dim() const override { return box_.dim(); }
  Box box() const override { return box_; }
  std::string name() const override { return name_; }

 protected:
  ObjectiveValue do_evaluate(const Vector& x) override { return fn_(x); }

 private:
  std::string name_;
  Box box_;
  Fn fn_;
};

}  // namespace hktr
