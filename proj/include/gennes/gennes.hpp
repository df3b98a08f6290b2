//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_GENNES_HPP
#define GENNES_GENNES_HPP

#include <cstddef>
#include <cstdint>

#include "gennes/generator.hpp"
#include "gennes/objectives.hpp"
#include "gennes/problem.hpp"
#include "gennes/run_record.hpp"

namespace gennes {

struct GennesConfig {
  std::size_t population = 20;
  /// Iteration cap; 0 means "until the budget runs out".
  std::size_t max_iterations = 0;
  double learning_rate = 1e-3;
  GeneratorSettings generator;
  std::uint64_t seed = 0;
};

/// Evolutionary search driven by a generator network. Each iteration draws
/// annealed noise, generates a population, queries values and gradients,
/// backpropagates the mean objective into the generator and takes one Adam
/// step. Stops at max_iterations or when the meter cannot afford a full
/// population. The trace holds one point per iteration.
///
/// Throws NonFiniteValue if the problem returns NaN or infinity.
RunRecord run_gennes(const Problem &problem, const GennesConfig &cfg,
                     BudgetMeter &meter, Rng &rng);

RunRecord run_gennes(const Objective &obj, const GennesConfig &cfg,
                     BudgetMeter &meter, Rng &rng);

}  // namespace gennes

#endif  // GENNES_GENNES_HPP
