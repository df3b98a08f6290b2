//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "gennes/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gennes/error.hpp"

namespace gennes {

void BudgetMeter::charge(std::uint64_t units) {
  if (!can_afford(units))
    throw BudgetExhausted("budget exhausted: " + std::to_string(used_) + " of "
                          + std::to_string(limit_) + " units used, "
                          + std::to_string(units) + " requested");
  used_ += units;
}

namespace {
  void check_input(const Problem &p, std::span<const double> x) {
    if (x.size() != p.dim())
      throw DimensionMismatch("query has length " + std::to_string(x.size())
                              + ", problem dimension is "
                              + std::to_string(p.dim()));
  }
}  // namespace

ValueAndGradient eval_with_grad(const Problem &p, std::span<const double> x,
                                BudgetMeter &meter) {
  check_input(p, x);
  meter.charge(meter.grad_cost());

  ValueAndGradient r { 0.0, std::vector<double>(p.dim()) };
  r.value = p.evaluate(x, r.grad);
  if (!std::isfinite(r.value)
      || !std::all_of(r.grad.begin(), r.grad.end(),
                      [](double g) { return std::isfinite(g); }))
    throw NonFiniteValue("objective returned a non-finite value or gradient");
  return r;
}

double eval_value(const Problem &p, std::span<const double> x,
                  BudgetMeter &meter) {
  check_input(p, x);
  meter.charge(1);
  const double v = p.evaluate(x, {});
  if (!std::isfinite(v))
    throw NonFiniteValue("objective returned a non-finite value");
  return v;
}

void clip_to_box(const Problem &p, std::span<double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::clamp(x[i], p.lower[i], p.upper[i]);
}

std::vector<double> uniform_in_box(const Problem &p, Rng &rng) {
  std::vector<double> x(p.dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::uniform_real_distribution<double> u(p.lower[i], p.upper[i]);
    x[i] = u(rng);
  }
  return x;
}

namespace {
  std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::string_view tag) {
  // FNV-1a over the tag
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ h);
}

}  // namespace gennes
