//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_BASELINES_HPP
#define GENNES_BASELINES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gennes/linalg.hpp"
#include "gennes/objectives.hpp"
#include "gennes/problem.hpp"
#include "gennes/run_record.hpp"

namespace gennes {

// --- L-BFGS ---------------------------------------------------------------

struct LbfgsConfig {
  std::size_t memory = 10;
  std::size_t max_iters = 1000;
  /// Stop once max_i |P(x - g) - x|_i falls below this.
  double pg_tol = 1e-5;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  std::size_t max_backtracks = 30;

  void validate() const;
};

enum class LbfgsStatus { Converged, MaxIterations, BudgetExhausted, LineSearchFailure };

struct LbfgsResult {
  std::vector<double> x;
  double f;
  LbfgsStatus status;
  std::size_t iterations;
};

/// Called after every metered query with the queried point and its value.
using QueryObserver = std::function<void(std::span<const double>, double)>;

/// Max-norm of the projected gradient P(x - g) - x.
double projected_gradient_norm(const Problem &p, std::span<const double> x,
                               std::span<const double> g);

/// Box-constrained L-BFGS: two-loop recursion on the free variables,
/// projection onto the box and backtracking Armijo search. Every probe is
/// one joint query. When the budget runs out the best point seen is
/// returned; on line-search failure the current iterate is returned.
LbfgsResult lbfgs_minimize(const Problem &p, std::span<const double> x0,
                           const LbfgsConfig &cfg, BudgetMeter &meter,
                           const QueryObserver &observer = {});

/// Restarts L-BFGS from uniform starts until the meter is exhausted or
/// `max_starts` (0 = unlimited) starts were made. Trace has one point per
/// query.
RunRecord multistart_lbfgs(const Problem &p, BudgetMeter &meter,
                           const LbfgsConfig &cfg, Rng &rng,
                           std::size_t max_starts = 0,
                           const QueryObserver &observer = {});

RunRecord multistart_lbfgs(const Objective &obj, std::uint64_t budget,
                           const LbfgsConfig &cfg, Rng &rng,
                           std::uint64_t grad_cost = 1);

// --- CMA-ES ---------------------------------------------------------------

struct CmaesState {
  Eigen::VectorXd mean;
  double sigma;
  Eigen::MatrixXd cov;
  std::size_t lambda;
  std::size_t mu;
  Eigen::VectorXd p_sigma;
  Eigen::VectorXd p_c;
};

/// Called once per generation, after the update.
using CmaesObserver = std::function<void(const CmaesState &)>;

/// (mu/mu_w, lambda)-CMA-ES with log-linear weights, rank-one and rank-mu
/// covariance updates and cumulative step-size adaptation. Samples are
/// clipped to the box before evaluation.
RunRecord cmaes_run(const Problem &p, std::size_t pop, BudgetMeter &meter,
                    std::span<const double> init_mean, double init_sigma,
                    Rng &rng, const CmaesObserver &observer = {});

RunRecord cmaes_run(const Objective &obj, std::size_t pop,
                    std::uint64_t budget, std::span<const double> init_mean,
                    double init_sigma, Rng &rng);

// --- Gaussian NES -----------------------------------------------------------

struct NesState {
  std::vector<double> mean;
  std::vector<double> std;
  double mean_lr = 1.0;
  double std_lr = 0.1;
};

struct NesGradient {
  std::vector<double> mean;
  std::vector<double> log_std;
};

/// Score-function gradient of E[f] for a diagonal Gaussian, with the mean
/// fitness subtracted as a baseline:
///   g_mean    = 1/N sum (f_i - b) (x_i - mu) / s^2
///   g_log_std = 1/N sum (f_i - b) ((x_i - mu)^2 / s^2 - 1)
/// Throws ShapeMismatch on inconsistent shapes.
NesGradient nes_gradient(const DenseMatrix &samples,
                         std::span<const double> fvals, const NesState &state);

/// Called once per generation, after the update.
using NesObserver = std::function<void(const NesState &)>;

/// Gradient descent on (mean, log std), preconditioned by the Fisher
/// diagonal and normalized by the population's fitness spread.
RunRecord nes_run(const Problem &p, std::size_t pop, BudgetMeter &meter,
                  std::span<const double> init_mean,
                  std::span<const double> init_std, Rng &rng,
                  const NesObserver &observer = {});

RunRecord nes_run(const Objective &obj, std::size_t pop, std::uint64_t budget,
                  std::span<const double> init_mean,
                  std::span<const double> init_std, Rng &rng);

}  // namespace gennes

#endif  // GENNES_BASELINES_HPP
