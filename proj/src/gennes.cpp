//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "gennes/gennes.hpp"

#include <stdexcept>
#include <string>

#include "gennes/error.hpp"

namespace gennes {

RunRecord run_gennes(const Problem &problem, const GennesConfig &cfg,
                     BudgetMeter &meter, Rng &rng) {
  if (cfg.population < 1)
    throw std::invalid_argument("gennes: population must be >= 1");

  const GeneratorConfig gcfg =
      make_generator_config(cfg.generator, problem.lower, problem.upper);
  GeneratorNetwork net = init_generator(gcfg, rng);
  AdamState adam(net.num_params());

  const std::size_t n = cfg.population;
  const std::size_t d = problem.dim();
  const std::uint64_t cost_per_iteration = n * meter.grad_cost();

  IncumbentTracker best;
  DenseMatrix grad_f(n, d);
  for (std::uint64_t t = 0;
       cfg.max_iterations == 0 || t < cfg.max_iterations; ++t) {
    if (!meter.can_afford(cost_per_iteration))
      break;

    const DenseMatrix u = sample_noise(gcfg, rng, t, n);
    const DenseMatrix x = net.forward(u);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      ValueAndGradient q;
      try {
        q = eval_with_grad(problem, xi, meter);
      } catch (const NonFiniteValue &e) {
        throw NonFiniteValue("gennes: iteration " + std::to_string(t)
                             + ", sample " + std::to_string(i) + ": "
                             + e.what());
      }
      best.observe(xi, q.value);
      std::copy(q.grad.begin(), q.grad.end(), grad_f.row(i).begin());
    }
    best.mark(meter.used());

    const auto g = net.backward(u, grad_f);
    adam_step(net, adam, g, cfg.learning_rate);
  }

  RunRecord r;
  r.algorithm = "gennes";
  r.dim = d;
  r.seed = cfg.seed;
  best.fill(r);
  return r;
}

RunRecord run_gennes(const Objective &obj, const GennesConfig &cfg,
                     BudgetMeter &meter, Rng &rng) {
  RunRecord r = run_gennes(obj.problem(), cfg, meter, rng);
  r.objective = std::string(obj.name());
  return r;
}

}  // namespace gennes
