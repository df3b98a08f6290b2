//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_BENCH_HPP
#define GENNES_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gennes/baselines.hpp"
#include "gennes/bo.hpp"
#include "gennes/gennes.hpp"
#include "gennes/objectives.hpp"
#include "gennes/run_record.hpp"

namespace gennes {

struct ExperimentConfig {
  ObjectiveKind objective = ObjectiveKind::Rastrigin;
  std::size_t dim = 0;
  std::size_t folds = 10;
  std::vector<std::uint64_t> budgets { 100, 1000, 10000, 100000 };
  std::uint64_t seed = 0;
  /// Unset: the objective's default margin.
  std::optional<double> shift_margin;
  Alpine1Variant alpine1_variant = Alpine1Variant::Paper;
  std::uint64_t grad_cost = 1;
  std::vector<std::string> algorithms { "gennes", "lbfgs", "cmaes", "nes" };
  /// Fill wall_ms with measured time; off keeps the CSV byte-reproducible.
  bool timing = false;

  GennesConfig gennes;
  LbfgsConfig lbfgs;
  std::size_t cmaes_population = 20;
  /// 0: a quarter of the domain width.
  double cmaes_init_sigma = 0.0;
  std::size_t nes_population = 20;
  /// 0: a quarter of the domain width.
  double nes_init_std = 0.0;

  BoConfig bo;
  std::vector<InnerMaximizer> bo_inner { InnerMaximizer::Gennes,
                                         InnerMaximizer::MultistartLbfgs };

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values throw ParseError with the line number.
ExperimentConfig parse_config(std::string_view text,
                              std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path &path);

struct RegretSample {
  double regret;
  /// The trace starts after the budget; `regret` is from its first entry.
  bool before_start;
};

/// Last-value-carried-forward regret at `budget`. Throws EmptyTrace.
RegretSample regret_at(const std::vector<TracePoint> &trace,
                       std::uint64_t budget, double f_star);

struct ResultRow {
  std::string algorithm;
  std::string function;
  std::size_t dim;
  std::size_t fold;
  std::uint64_t seed;
  std::uint64_t evals;
  double best_value;
  double regret;
  std::uint64_t wall_ms;

  bool operator==(const ResultRow &) const = default;
};

inline constexpr std::string_view kResultsHeader =
    "algorithm,function,dim,fold,seed,evals,best_value,regret,wall_ms";

std::string format_row(const ResultRow &row);
std::vector<ResultRow> read_results(std::istream &in);
std::vector<ResultRow> read_results(const std::filesystem::path &path);

struct RegretCell {
  std::string algorithm;
  std::uint64_t budget;
  double mean;
  /// Sample standard deviation over folds; 0 for a single fold.
  double std;
  std::size_t folds;
};

struct RegretTable {
  std::string function;
  std::size_t dim = 0;
  /// Ordered by first appearance of the algorithm, then budget.
  std::vector<RegretCell> cells;

  const RegretCell *find(std::string_view algorithm,
                         std::uint64_t budget) const;
};

RegretTable aggregate(const std::vector<ResultRow> &rows);
std::string format_table(const RegretTable &table);

/// Runs one algorithm on one fold's objective up to `budget` evaluations.
RunRecord run_algorithm(std::string_view algorithm, const Objective &obj,
                        const ExperimentConfig &cfg, std::uint64_t budget,
                        std::uint64_t seed);

/// Runs every (algorithm, fold), writes the per-fold CSV to `out` and the
/// aggregated table to `out` + ".summary.csv". Rows already produced are
/// flushed before a failure propagates.
RegretTable run_experiment(const ExperimentConfig &cfg,
                           const std::filesystem::path &out);

struct BoResultRow {
  std::string inner_method;
  std::size_t fold;
  std::size_t step;
  std::uint64_t objective_evals;
  std::uint64_t acq_queries;
  double incumbent;
};

inline constexpr std::string_view kBoHeader =
    "inner_method,fold,step,objective_evals,acq_queries,incumbent";

/// Both inner methods of a fold share the same initial design.
std::vector<BoResultRow> run_bo_experiment(const ExperimentConfig &cfg,
                                           const std::filesystem::path &out);

}  // namespace gennes

#endif  // GENNES_BENCH_HPP
