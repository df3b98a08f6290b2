//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_BO_HPP
#define GENNES_BO_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gennes/baselines.hpp"
#include "gennes/generator.hpp"
#include "gennes/gp.hpp"
#include "gennes/objectives.hpp"
#include "gennes/problem.hpp"

namespace gennes {

enum class InnerMaximizer { Gennes, MultistartLbfgs };

std::string_view inner_maximizer_name(InnerMaximizer m);
/// Accepts "gennes", "lbfgs" and "multistart_lbfgs".
std::optional<InnerMaximizer> parse_inner_maximizer(std::string_view name);

struct BoConfig {
  std::size_t init_points = 100;
  std::size_t outer_iterations = 30;
  InnerMaximizer inner = InnerMaximizer::Gennes;
  /// Acquisition-query cap per outer step; 0 leaves only the method's own
  /// limits.
  std::uint64_t inner_budget = 0;

  std::size_t gennes_population = 10;
  std::size_t gennes_iterations = 30;
  double gennes_learning_rate = 1e-3;
  GeneratorSettings gennes_generator;

  std::size_t lbfgs_starts = 100;
  LbfgsConfig lbfgs;

  std::size_t fit_restarts = 4;
  std::size_t fit_iterations = 200;
  std::size_t refit_every = 5;

  /// Throws std::invalid_argument on the first invalid field.
  void validate() const;
};

struct AcquisitionResult {
  std::vector<double> x_star;
  double ei;
  std::uint64_t queries;
};

/// Maximizes EI by minimizing -EI with the configured inner method. Every
/// EI evaluation counts as one query; `observer` sees each (x, EI) pair.
AcquisitionResult maximize_acquisition(const GpModel &model,
                                       const Incumbent &inc,
                                       std::span<const double> lower,
                                       std::span<const double> upper,
                                       const BoConfig &cfg, Rng &rng,
                                       const QueryObserver &observer = {});

struct BoStep {
  std::size_t step;
  std::uint64_t objective_evals;
  std::uint64_t acq_queries;
  double incumbent;

  bool operator==(const BoStep &) const = default;
};

struct BoRecord {
  /// Row 0 is the state right after the initial design.
  std::vector<BoStep> steps;
  double incumbent;
  std::vector<double> incumbent_point;
};

/// `init` overrides the uniform initial design when non-empty.
BoRecord run_bo(const Objective &obj, const BoConfig &cfg, Rng &rng,
                const DenseMatrix &init = {});

}  // namespace gennes

#endif  // GENNES_BO_HPP
