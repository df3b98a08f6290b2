//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "gennes/bo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gennes/error.hpp"
#include "gennes/gennes.hpp"

namespace gennes {

std::string_view inner_maximizer_name(InnerMaximizer m) {
  return m == InnerMaximizer::Gennes ? "gennes" : "lbfgs";
}

std::optional<InnerMaximizer> parse_inner_maximizer(std::string_view name) {
  if (name == "gennes")
    return InnerMaximizer::Gennes;
  if (name == "lbfgs" || name == "multistart_lbfgs")
    return InnerMaximizer::MultistartLbfgs;
  return std::nullopt;
}

void BoConfig::validate() const {
  if (init_points < 1)
    throw std::invalid_argument("bo.init_points must be >= 1");
  if (gennes_population < 1)
    throw std::invalid_argument("bo.gennes.population must be >= 1");
  if (gennes_iterations < 1)
    throw std::invalid_argument("bo.gennes.iterations must be >= 1");
  if (!(gennes_learning_rate > 0.0))
    throw std::invalid_argument("bo.gennes.learning_rate must be > 0");
  if (lbfgs_starts < 1)
    throw std::invalid_argument("bo.lbfgs.starts must be >= 1");
  if (fit_restarts < 1)
    throw std::invalid_argument("gp.fit_restarts must be >= 1");
  if (refit_every < 1)
    throw std::invalid_argument("gp.refit_every must be >= 1");
  lbfgs.validate();
}

AcquisitionResult maximize_acquisition(const GpModel &model,
                                       const Incumbent &inc,
                                       std::span<const double> lower,
                                       std::span<const double> upper,
                                       const BoConfig &cfg, Rng &rng,
                                       const QueryObserver &observer) {
  Problem p;
  p.lower.assign(lower.begin(), lower.end());
  p.upper.assign(upper.begin(), upper.end());
  // Scaled to normalized target units so the inner methods see O(1) values.
  const double scale = 1.0 / model.target_scale();
  p.evaluate = [&](std::span<const double> x, std::span<double> grad) {
    const auto r = expected_improvement(model, x, inc);
    if (observer)
      observer(x, r.ei);
    if (!grad.empty())
      for (std::size_t j = 0; j < grad.size(); ++j)
        grad[j] = -scale * r.grad[j];
    return -scale * r.ei;
  };

  RunRecord rec;
  std::uint64_t used = 0;
  if (cfg.inner == InnerMaximizer::Gennes) {
    GennesConfig g;
    g.population = cfg.gennes_population;
    g.max_iterations = cfg.gennes_iterations;
    g.learning_rate = cfg.gennes_learning_rate;
    g.generator = cfg.gennes_generator;
    std::uint64_t limit = g.population * g.max_iterations;
    if (cfg.inner_budget > 0)
      limit = std::min(limit, cfg.inner_budget);
    BudgetMeter meter(limit);
    rec = run_gennes(p, g, meter, rng);
    used = meter.used();
  } else {
    BudgetMeter meter(cfg.inner_budget > 0
                          ? cfg.inner_budget
                          : std::numeric_limits<std::uint64_t>::max());
    rec = multistart_lbfgs(p, meter, cfg.lbfgs, rng, cfg.lbfgs_starts);
    used = meter.used();
  }

  if (rec.best_point.empty())
    return { inc.location, 0.0, used };
  return { rec.best_point, -rec.best_value / scale, used };
}

namespace {
  bool near_row(const DenseMatrix &x, std::span<const double> q) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double diff = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j)
        diff = std::max(diff, std::abs(x(i, j) - q[j]));
      if (diff <= 1e-10)
        return true;
    }
    return false;
  }

  // Nudges q off existing rows by 1e-6 of the domain width per attempt.
  void separate(const DenseMatrix &x, std::vector<double> &q,
                const Interval &dom) {
    const double h = 1e-6 * dom.width();
    for (int attempt = 1; near_row(x, q) && attempt <= 64; ++attempt) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double up = q[j] + h;
        q[j] = up <= dom.hi ? up : q[j] - h;
      }
    }
  }
}  // namespace

BoRecord run_bo(const Objective &obj, const BoConfig &cfg, Rng &rng,
                const DenseMatrix &init) {
  cfg.validate();
  const std::size_t d = obj.dim();
  const Problem prob = obj.problem();

  DenseMatrix x;
  std::vector<double> f;
  if (!init.empty()) {
    if (init.cols() != d)
      throw DimensionMismatch("bo: initial design has wrong dimension");
    for (std::size_t i = 0; i < init.rows(); ++i) {
      std::vector<double> q(init.row(i).begin(), init.row(i).end());
      if (near_row(x, q))
        continue;
      x.append_row(q);
      f.push_back(obj.value(q));
    }
  } else {
    for (std::size_t i = 0; i < cfg.init_points; ++i) {
      auto q = uniform_in_box(prob, rng);
      separate(x, q, obj.domain());
      x.append_row(q);
      f.push_back(obj.value(q));
    }
  }

  BoRecord rec;
  rec.incumbent = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < rec.incumbent) {
      rec.incumbent = f[i];
      rec.incumbent_point.assign(x.row(i).begin(), x.row(i).end());
    }
  }
  std::uint64_t acq = 0;
  rec.steps.push_back({ 0, f.size(), 0, rec.incumbent });

  GpFitConfig fit;
  fit.restarts = cfg.fit_restarts;
  fit.iterations = cfg.fit_iterations;
  fit.lower = prob.lower;
  fit.upper = prob.upper;

  std::optional<KernelParams> params;
  std::size_t fitted_at = 0;
  for (std::size_t step = 1; step <= cfg.outer_iterations; ++step) {
    GpModel model;
    if (!params || f.size() >= fitted_at + cfg.refit_every) {
      fit.optimize = true;
      fit.initial = params;
      fit.seed = rng();
      model = gp_fit(x, f, fit);
      params = model.params();
      fitted_at = f.size();
    } else {
      model = gp_build(x, f, *params, fit);
    }

    const Incumbent inc = incumbent(model);
    auto res = maximize_acquisition(model, inc, prob.lower, prob.upper, cfg,
                                    rng);
    acq += res.queries;

    separate(x, res.x_star, obj.domain());
    const double v = obj.value(res.x_star);
    x.append_row(res.x_star);
    f.push_back(v);
    if (v < rec.incumbent) {
      rec.incumbent = v;
      rec.incumbent_point = res.x_star;
    }
    rec.steps.push_back({ step, f.size(), acq, rec.incumbent });
  }
  return rec;
}

}  // namespace gennes
