//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gennes/baselines.hpp"
#include "gennes/error.hpp"

namespace gennes {

NesGradient nes_gradient(const DenseMatrix &samples,
                         std::span<const double> fvals, const NesState &state) {
  const std::size_t n = samples.rows();
  const std::size_t d = samples.cols();
  if (fvals.size() != n || state.mean.size() != d || state.std.size() != d)
    throw ShapeMismatch("nes_gradient: samples are " + std::to_string(n) + "x"
                        + std::to_string(d) + ", fvals "
                        + std::to_string(fvals.size()) + ", state "
                        + std::to_string(state.mean.size()));

  NesGradient g { std::vector<double>(d, 0.0), std::vector<double>(d, 0.0) };
  if (n == 0)
    return g;

  // Anchored at fvals[0] so a constant population gives a baseline that is
  // bitwise equal to every entry.
  double shift = 0.0;
  for (double f : fvals)
    shift += f - fvals[0];
  const double baseline = fvals[0] + shift / static_cast<double>(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double a = fvals[i] - baseline;
    if (a == 0.0)
      continue;
    const auto xi = samples.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double z = (xi[j] - state.mean[j]) / state.std[j];
      g.mean[j] += a * z / state.std[j];
      g.log_std[j] += a * (z * z - 1.0);
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) {
    g.mean[j] *= inv_n;
    g.log_std[j] *= inv_n;
  }
  return g;
}

RunRecord nes_run(const Problem &p, std::size_t pop, BudgetMeter &meter,
                  std::span<const double> init_mean,
                  std::span<const double> init_std, Rng &rng,
                  const NesObserver &observer) {
  if (pop < 2)
    throw std::invalid_argument("nes: population must be >= 2");
  const std::size_t d = p.dim();
  if (init_mean.size() != d || init_std.size() != d)
    throw DimensionMismatch("nes: initial mean/std have wrong length");

  NesState st;
  st.mean.assign(init_mean.begin(), init_mean.end());
  st.std.assign(init_std.begin(), init_std.end());
  for (double s : st.std)
    if (!(s > 0.0))
      throw std::invalid_argument("nes: initial std must be > 0");
  st.mean_lr = 1.0;
  st.std_lr = (3.0 + std::log(static_cast<double>(d)))
              / (5.0 * std::sqrt(static_cast<double>(d)));

  IncumbentTracker best;
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix xs(pop, d);
  std::vector<double> fvals(pop);
  std::vector<double> log_std(d);
  for (std::size_t j = 0; j < d; ++j)
    log_std[j] = std::log(st.std[j]);

  while (meter.can_afford(pop)) {
    for (std::size_t k = 0; k < pop; ++k) {
      auto x = xs.row(k);
      for (std::size_t j = 0; j < d; ++j)
        x[j] = st.mean[j] + st.std[j] * normal(rng);
      clip_to_box(p, x);
      fvals[k] = eval_value(p, x, meter);
      best.observe(x, fvals[k]);
    }
    best.mark(meter.used());

    double mean_f = 0.0;
    for (double f : fvals)
      mean_f += f;
    mean_f /= static_cast<double>(pop);
    double var_f = 0.0;
    for (double f : fvals)
      var_f += (f - mean_f) * (f - mean_f);
    const double spread = std::sqrt(var_f / static_cast<double>(pop));

    if (spread > 0.0) {
      const NesGradient g = nes_gradient(xs, fvals, st);
      for (std::size_t j = 0; j < d; ++j) {
        // natural gradient: Fisher is 1/s^2 for the mean, 2 for log s
        const double s2 = st.std[j] * st.std[j];
        st.mean[j] -= st.mean_lr * s2 * g.mean[j] / spread;
        st.mean[j] = std::clamp(st.mean[j], p.lower[j], p.upper[j]);
        log_std[j] -= st.std_lr * 0.5 * g.log_std[j] / spread;
        log_std[j] = std::max(log_std[j], -700.0);
        st.std[j] = std::exp(log_std[j]);
      }
    }

    if (observer)
      observer(st);
  }

  RunRecord r;
  r.algorithm = "nes";
  r.dim = d;
  best.fill(r);
  return r;
}

RunRecord nes_run(const Objective &obj, std::size_t pop, std::uint64_t budget,
                  std::span<const double> init_mean,
                  std::span<const double> init_std, Rng &rng) {
  BudgetMeter meter(budget);
  RunRecord r = nes_run(obj.problem(), pop, meter, init_mean, init_std, rng);
  r.objective = std::string(obj.name());
  return r;
}

}  // namespace gennes
