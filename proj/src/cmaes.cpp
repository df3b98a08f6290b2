//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gennes/baselines.hpp"
#include "gennes/error.hpp"

namespace gennes {

RunRecord cmaes_run(const Problem &p, std::size_t pop, BudgetMeter &meter,
                    std::span<const double> init_mean, double init_sigma,
                    Rng &rng, const CmaesObserver &observer) {
  if (pop < 4)
    throw std::invalid_argument("cmaes: population must be >= 4");
  if (!(init_sigma > 0.0))
    throw std::invalid_argument("cmaes: initial sigma must be > 0");
  const std::size_t n = p.dim();
  if (init_mean.size() != n)
    throw DimensionMismatch("cmaes: initial mean has wrong length");

  const double nd = static_cast<double>(n);
  CmaesState st;
  st.lambda = pop;
  st.mu = pop / 2;
  st.mean = Eigen::Map<const Eigen::VectorXd>(init_mean.data(), n);
  st.sigma = init_sigma;
  st.cov = Eigen::MatrixXd::Identity(n, n);
  st.p_sigma = Eigen::VectorXd::Zero(n);
  st.p_c = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd w(st.mu);
  for (std::size_t i = 0; i < st.mu; ++i)
    w[i] = std::log(st.mu + 0.5) - std::log(i + 1.0);
  w /= w.sum();
  const double mu_eff = 1.0 / w.squaredNorm();

  const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0)
      + c_sigma;
  const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
  const double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
  const double c_mu =
      std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff)
                              / ((nd + 2.0) * (nd + 2.0) + mu_eff));
  const double chi_n =
      std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  IncumbentTracker best;
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd ys(n, pop);
  std::vector<double> fvals(pop);
  std::vector<double> x(n);
  std::vector<std::size_t> order(pop);

  for (std::size_t gen = 0;; ++gen) {
    if (!meter.can_afford(pop))
      break;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(st.cov);
    const Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(1e-300);
    const Eigen::MatrixXd &basis = eig.eigenvectors();
    const Eigen::VectorXd dvec = evals.cwiseSqrt();
    if (!(st.sigma * dvec.maxCoeff() > 1e-300) || !std::isfinite(st.sigma))
      break;

    for (std::size_t k = 0; k < pop; ++k) {
      Eigen::VectorXd z(n);
      for (std::size_t i = 0; i < n; ++i)
        z[i] = normal(rng);
      const Eigen::VectorXd y = basis * dvec.cwiseProduct(z);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = st.mean[i] + st.sigma * y[i];
      clip_to_box(p, x);
      for (std::size_t i = 0; i < n; ++i)
        ys(i, k) = (x[i] - st.mean[i]) / st.sigma;
      fvals[k] = eval_value(p, x, meter);
      best.observe(x, fvals[k]);
    }
    best.mark(meter.used());

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return fvals[a] < fvals[b];
    });

    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < st.mu; ++i)
      y_w += w[i] * ys.col(order[i]);
    st.mean += st.sigma * y_w;

    const Eigen::MatrixXd inv_sqrt =
        basis * dvec.cwiseInverse().asDiagonal() * basis.transpose();
    st.p_sigma = (1.0 - c_sigma) * st.p_sigma
                 + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff)
                       * (inv_sqrt * y_w);
    const double ps_norm = st.p_sigma.norm();
    const double decay =
        std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (gen + 1.0)));
    const bool h_sigma = ps_norm / decay < (1.4 + 2.0 / (nd + 1.0)) * chi_n;

    st.p_c = (1.0 - c_c) * st.p_c;
    if (h_sigma)
      st.p_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;
    const double delta_h = h_sigma ? 0.0 : c_c * (2.0 - c_c);

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < st.mu; ++i) {
      const auto yi = ys.col(order[i]);
      rank_mu.noalias() += w[i] * yi * yi.transpose();
    }
    st.cov = (1.0 + c_1 * delta_h - c_1 - c_mu) * st.cov
             + c_1 * st.p_c * st.p_c.transpose() + c_mu * rank_mu;
    st.cov = 0.5 * (st.cov + st.cov.transpose()).eval();

    st.sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));

    if (observer)
      observer(st);
  }

  RunRecord r;
  r.algorithm = "cmaes";
  r.dim = n;
  best.fill(r);
  return r;
}

RunRecord cmaes_run(const Objective &obj, std::size_t pop,
                    std::uint64_t budget, std::span<const double> init_mean,
                    double init_sigma, Rng &rng) {
  BudgetMeter meter(budget);
  RunRecord r = cmaes_run(obj.problem(), pop, meter, init_mean, init_sigma, rng);
  r.objective = std::string(obj.name());
  return r;
}

}  // namespace gennes
