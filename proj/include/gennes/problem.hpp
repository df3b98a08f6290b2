//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_PROBLEM_HPP
#define GENNES_PROBLEM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gennes {

using Rng = std::mt19937_64;

/// A box-constrained minimization target. `evaluate` writes the gradient
/// into `grad` when it is non-empty and returns the value.
struct Problem {
  using Evaluator =
      std::function<double(std::span<const double> x, std::span<double> grad)>;

  std::vector<double> lower;
  std::vector<double> upper;
  Evaluator evaluate;

  std::size_t dim() const { return lower.size(); }
};

/// Counts evaluation units against a fixed limit. A joint (value, gradient)
/// query costs `grad_cost` units, a value-only query costs one.
class BudgetMeter {
public:
  explicit BudgetMeter(std::uint64_t limit, std::uint64_t grad_cost = 1)
      : limit_(limit), grad_cost_(grad_cost) { }

  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }
  std::uint64_t grad_cost() const { return grad_cost_; }
  std::uint64_t remaining() const { return limit_ - used_; }
  bool can_afford(std::uint64_t units) const { return units <= remaining(); }

  /// Throws BudgetExhausted when fewer than `units` remain; `used` is then
  /// left untouched.
  void charge(std::uint64_t units);

private:
  std::uint64_t used_ = 0;
  std::uint64_t limit_;
  std::uint64_t grad_cost_;
};

struct ValueAndGradient {
  double value;
  std::vector<double> grad;
};

/// Metered joint query. Throws BudgetExhausted before evaluating when the
/// meter cannot afford it, NonFiniteValue if the value or gradient is not
/// finite.
ValueAndGradient eval_with_grad(const Problem &p, std::span<const double> x,
                                BudgetMeter &meter);

/// Metered value-only query (one unit).
double eval_value(const Problem &p, std::span<const double> x,
                  BudgetMeter &meter);

/// Projects `x` onto the problem's box in place.
void clip_to_box(const Problem &p, std::span<double> x);

std::vector<double> uniform_in_box(const Problem &p, Rng &rng);

/// Deterministic 64-bit seed derived from a master seed, an index and a tag.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::string_view tag);

}  // namespace gennes

#endif  // GENNES_PROBLEM_HPP
