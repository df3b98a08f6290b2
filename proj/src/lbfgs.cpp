//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "gennes/baselines.hpp"
#include "gennes/error.hpp"

namespace gennes {

void LbfgsConfig::validate() const {
  if (memory < 1)
    throw std::invalid_argument("lbfgs: memory must be >= 1");
  if (!(pg_tol > 0.0))
    throw std::invalid_argument("lbfgs: pg_tol must be > 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0))
    throw std::invalid_argument("lbfgs: armijo_c1 must be in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw std::invalid_argument("lbfgs: backtrack must be in (0, 1)");
}

double projected_gradient_norm(const Problem &p, std::span<const double> x,
                               std::span<const double> g) {
  double norm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double moved = std::clamp(x[i] - g[i], p.lower[i], p.upper[i]);
    norm = std::max(norm, std::abs(moved - x[i]));
  }
  return norm;
}

namespace {
  struct Correction {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
  };

  bool is_active(const Problem &p, std::span<const double> x,
                 std::span<const double> g, std::size_t i) {
    return (x[i] <= p.lower[i] && g[i] > 0.0)
           || (x[i] >= p.upper[i] && g[i] < 0.0);
  }

  // d = -H g restricted to the free variables
  std::vector<double> two_loop(const std::deque<Correction> &hist,
                               std::span<const double> g,
                               const std::vector<bool> &active) {
    const std::size_t n = g.size();
    std::vector<double> q(g.begin(), g.end());
    for (std::size_t i = 0; i < n; ++i)
      if (active[i])
        q[i] = 0.0;

    std::vector<double> alpha(hist.size());
    for (std::size_t k = hist.size(); k-- > 0;) {
      const auto &c = hist[k];
      alpha[k] = c.rho * dot(c.s, q);
      for (std::size_t i = 0; i < n; ++i)
        q[i] -= alpha[k] * c.y[i];
    }

    if (!hist.empty()) {
      const auto &c = hist.back();
      const double gamma = dot(c.s, c.y) / dot(c.y, c.y);
      for (double &v : q)
        v *= gamma;
    }

    for (std::size_t k = 0; k < hist.size(); ++k) {
      const auto &c = hist[k];
      const double beta = c.rho * dot(c.y, q);
      for (std::size_t i = 0; i < n; ++i)
        q[i] += (alpha[k] - beta) * c.s[i];
    }

    for (std::size_t i = 0; i < n; ++i)
      q[i] = active[i] ? 0.0 : -q[i];
    return q;
  }
}  // namespace

LbfgsResult lbfgs_minimize(const Problem &p, std::span<const double> x0,
                           const LbfgsConfig &cfg, BudgetMeter &meter,
                           const QueryObserver &observer) {
  cfg.validate();
  const std::size_t n = p.dim();
  if (x0.size() != n)
    throw DimensionMismatch("lbfgs: start point has wrong length");

  std::vector<double> x(x0.begin(), x0.end());
  clip_to_box(p, x);

  LbfgsResult best { x, std::numeric_limits<double>::infinity(),
                     LbfgsStatus::BudgetExhausted, 0 };
  const auto query = [&](std::span<const double> pt) {
    auto q = eval_with_grad(p, pt, meter);
    if (observer)
      observer(pt, q.value);
    if (q.value < best.f) {
      best.f = q.value;
      best.x.assign(pt.begin(), pt.end());
    }
    return q;
  };

  if (!meter.can_afford(meter.grad_cost()))
    return best;
  auto cur = query(x);
  double f = cur.value;
  std::vector<double> g = std::move(cur.grad);

  std::deque<Correction> hist;
  std::vector<bool> active(n);
  std::vector<double> xn(n);

  std::size_t iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    if (projected_gradient_norm(p, x, g) < cfg.pg_tol)
      return { x, f, LbfgsStatus::Converged, iter };

    for (std::size_t i = 0; i < n; ++i)
      active[i] = is_active(p, x, g, i);

    std::vector<double> d = two_loop(hist, g, active);
    double gd = dot(g, d);
    if (!(gd < 0.0)) {
      hist.clear();
      d = two_loop(hist, g, active);
      gd = dot(g, d);
      if (!(gd < 0.0))
        return { x, f, LbfgsStatus::Converged, iter };
    }

    double step = hist.empty() ? std::min(1.0, 1.0 / max_abs(d)) : 1.0;
    bool accepted = false;
    ValueAndGradient next;
    for (std::size_t bt = 0; bt <= cfg.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i)
        xn[i] = x[i] + step * d[i];
      clip_to_box(p, xn);

      double dec = 0.0, moved = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dec += g[i] * (xn[i] - x[i]);
        moved = std::max(moved, std::abs(xn[i] - x[i]));
      }
      if (moved == 0.0)
        return { x, f, LbfgsStatus::Converged, iter };

      if (!meter.can_afford(meter.grad_cost())) {
        best.status = LbfgsStatus::BudgetExhausted;
        best.iterations = iter;
        return best;
      }
      next = query(xn);
      if (next.value <= f + cfg.armijo_c1 * dec) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack;
    }
    if (!accepted)
      return { x, f, LbfgsStatus::LineSearchFailure, iter };

    Correction c { std::vector<double>(n), std::vector<double>(n), 0.0 };
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = xn[i] - x[i];
      c.y[i] = next.grad[i] - g[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-10 * dot(c.y, c.y) && sy > 0.0) {
      c.rho = 1.0 / sy;
      hist.push_back(std::move(c));
      if (hist.size() > cfg.memory)
        hist.pop_front();
    }

    x = xn;
    f = next.value;
    g = std::move(next.grad);
  }

  if (projected_gradient_norm(p, x, g) < cfg.pg_tol)
    return { x, f, LbfgsStatus::Converged, iter };
  return { x, f, LbfgsStatus::MaxIterations, iter };
}

RunRecord multistart_lbfgs(const Problem &p, BudgetMeter &meter,
                           const LbfgsConfig &cfg, Rng &rng,
                           std::size_t max_starts,
                           const QueryObserver &observer) {
  IncumbentTracker best;
  const QueryObserver track = [&](std::span<const double> x, double v) {
    best.observe(x, v);
    best.mark(meter.used());
    if (observer)
      observer(x, v);
  };

  for (std::size_t start = 0; max_starts == 0 || start < max_starts; ++start) {
    if (!meter.can_afford(meter.grad_cost()))
      break;
    const auto x0 = uniform_in_box(p, rng);
    lbfgs_minimize(p, x0, cfg, meter, track);
  }

  RunRecord r;
  r.algorithm = "lbfgs";
  r.dim = p.dim();
  best.fill(r);
  return r;
}

RunRecord multistart_lbfgs(const Objective &obj, std::uint64_t budget,
                           const LbfgsConfig &cfg, Rng &rng,
                           std::uint64_t grad_cost) {
  BudgetMeter meter(budget, grad_cost);
  RunRecord r = multistart_lbfgs(obj.problem(), meter, cfg, rng);
  r.objective = std::string(obj.name());
  return r;
}

}  // namespace gennes
