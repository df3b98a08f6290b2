//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gennes/error.hpp"
#include "gennes/gp.hpp"
#include "gennes/problem.hpp"

using namespace gennes;

namespace {

DenseMatrix random_points(std::size_t t, std::size_t d, double lo, double hi,
                          Rng &rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  DenseMatrix x(t, d);
  for (double &v : x.data())
    v = u(rng);
  return x;
}

double smooth(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    s += std::sin(3.0 * x[j]) + 0.5 * x[j] * x[j];
  return s;
}

std::vector<double> targets(const DenseMatrix &x) {
  std::vector<double> f(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    f[i] = smooth(x.row(i));
  return f;
}

KernelParams params(double sf2, std::vector<double> ell) {
  return { sf2, std::move(ell) };
}

GpFitConfig raw_config() {
  GpFitConfig c;
  c.optimize = false;
  c.normalize_targets = false;
  return c;
}

// Posterior mean and variance from an explicitly inverted Gram matrix.
struct DenseOracle {
  Eigen::MatrixXd k_inv;
  Eigen::VectorXd alpha;

  DenseOracle(const DenseMatrix &x, const std::vector<double> &f,
              const KernelParams &p, double jitter) {
    const auto t = static_cast<Eigen::Index>(x.rows());
    Eigen::MatrixXd k(t, t);
    for (Eigen::Index i = 0; i < t; ++i)
      for (Eigen::Index j = 0; j < t; ++j)
        k(i, j) = matern52_ard(x.row(i), x.row(j), p) + (i == j ? jitter : 0.0);
    k_inv = k.inverse();
    alpha = k_inv * Eigen::Map<const Eigen::VectorXd>(f.data(), t);
  }

  Posterior at(const DenseMatrix &x, std::span<const double> q,
               const KernelParams &p) const {
    Eigen::VectorXd ks(static_cast<Eigen::Index>(x.rows()));
    for (std::size_t i = 0; i < x.rows(); ++i)
      ks[static_cast<Eigen::Index>(i)] = matern52_ard(q, x.row(i), p);
    return { ks.dot(alpha), matern52_ard(q, q, p) - ks.dot(k_inv * ks) };
  }
};

}  // namespace

// ---- kernel ----------------------------------------------------------------

TEST(Matern52, SelfCovarianceAndSymmetry) {
  const auto p = params(2.5, { 0.3, 1.7 });
  const std::vector<double> a { 0.1, -0.4 }, b { 0.9, 2.0 };
  EXPECT_DOUBLE_EQ(matern52_ard(a, a, p), 2.5);
  EXPECT_DOUBLE_EQ(matern52_ard(a, b, p), matern52_ard(b, a, p));
}

TEST(Matern52, UnitDistanceValue) {
  const auto p = params(1.0, { 1.0 });
  const double s5 = std::sqrt(5.0);
  const double expected = (1.0 + s5 + 5.0 / 3.0) * std::exp(-s5);
  EXPECT_NEAR(matern52_ard(std::vector<double> { 0.0 }, std::vector<double> { 1.0 }, p),
              expected, 1e-15);
  EXPECT_NEAR(expected, 0.52399, 1e-5);
}

TEST(Matern52, GradientMatchesFiniteDifferences) {
  Rng rng(1);
  const auto p = params(1.3, { 0.4, 1.1, 2.0 });
  for (int k = 0; k < 20; ++k) {
    const auto xs = random_points(2, 3, -1.0, 1.0, rng);
    std::vector<double> x(xs.row(0).begin(), xs.row(0).end());
    std::vector<double> g(3);
    matern52_ard_grad(x, xs.row(1), p, g);
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-6, keep = x[j];
      x[j] = keep + h;
      const double fp = matern52_ard(x, xs.row(1), p);
      x[j] = keep - h;
      const double fm = matern52_ard(x, xs.row(1), p);
      x[j] = keep;
      EXPECT_NEAR(g[j], (fp - fm) / (2 * h), 1e-7);
    }
  }
}

TEST(KernelParams, Validation) {
  EXPECT_THROW(params(0.0, { 1.0 }).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, { -1.0 }).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.0, { INFINITY }).validate(), std::invalid_argument);
  EXPECT_NO_THROW(params(1.0, { 1.0 }).validate());
}

// ---- fitting and posterior ---------------------------------------------------

TEST(GpFit, SinglePointInterpolates) {
  const auto x = DenseMatrix::from_rows({ { 0.3, -0.2 } });
  const auto m = gp_fit(x, std::vector<double> { 3.0 });
  const auto p = gp_posterior(m, x.row(0));
  EXPECT_NEAR(p.mean, 3.0, 1e-12);
  EXPECT_LE(p.variance, m.jitter());
}

TEST(GpFit, ConstantTargets) {
  Rng rng(2);
  const auto x = random_points(8, 2, 0.0, 1.0, rng);
  const auto m = gp_fit(x, std::vector<double>(8, -4.5));
  for (std::size_t i = 0; i < 8; ++i)
    EXPECT_NEAR(gp_posterior(m, x.row(i)).mean, -4.5, 1e-9);
}

TEST(GpFit, InterpolatesTrainingData) {
  Rng rng(3);
  GpFitConfig cfg;
  cfg.lower = { -2, -2, -2 };
  cfg.upper = { 2, 2, 2 };
  const auto x = random_points(40, 3, -2.0, 2.0, rng);
  const auto f = targets(x);
  const auto m = gp_fit(x, f, cfg);
  const double tol = 1e-6 * (1.0 + max_abs(f));
  for (std::size_t i = 0; i < x.rows(); ++i)
    EXPECT_NEAR(gp_posterior(m, x.row(i)).mean, f[i], tol);
}

TEST(GpFit, SmoothOneDimensionalHeldOut) {
  GpFitConfig cfg;
  cfg.lower = { 0.0 };
  cfg.upper = { 2.0 };
  DenseMatrix x;
  for (int i = 0; i < 20; ++i)
    x.append_row(std::vector<double> { 2.0 * i / 19.0 });
  const auto f = targets(x);
  const auto m = gp_fit(x, f, cfg);
  for (int i = 0; i < 19; ++i) {
    const std::vector<double> q { 2.0 * (i + 0.5) / 19.0 };
    EXPECT_NEAR(gp_posterior(m, q).mean, smooth(q), 0.1);
  }
}

TEST(GpFit, RejectsDuplicates) {
  const auto x = DenseMatrix::from_rows({ { 0.5, 0.5 }, { 0.1, 0.2 }, { 0.5, 0.5 + 1e-12 } });
  EXPECT_THROW(gp_fit(x, std::vector<double> { 1, 2, 3 }), DuplicatePoints);
}

TEST(GpFit, FittedLmlDominatesCandidates) {
  Rng rng(4);
  const auto x = random_points(25, 2, 0.0, 1.0, rng);
  const auto f = targets(x);
  double best_candidate = -INFINITY;
  std::size_t seen = 0;
  GpFitConfig cfg;
  cfg.on_candidate = [&](const KernelParams &, double lml) {
    best_candidate = std::max(best_candidate, lml);
    ++seen;
  };
  const auto m = gp_fit(x, f, cfg);
  EXPECT_GT(seen, 50u);
  EXPECT_GE(m.log_marginal_likelihood(), best_candidate - 1e-12);
}

TEST(GpPosterior, MatchesDenseInverseOracle) {
  Rng rng(5);
  for (std::size_t t : { 5u, 30u, 100u }) {
    const auto x = random_points(t, 3, 0.0, 1.0, rng);
    const auto f = targets(x);
    const auto p = params(1.7, { 0.25, 0.4, 0.3 });
    const auto m = gp_build(x, f, p, raw_config());
    const DenseOracle oracle(x, f, p, m.jitter());
    const auto q = random_points(50, 3, -0.2, 1.2, rng);
    double worst = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) {
      const auto a = gp_posterior(m, q.row(i));
      const auto b = oracle.at(x, q.row(i), p);
      worst = std::max({ worst, std::abs(a.mean - b.mean),
                         std::abs(a.variance - std::max(b.variance, 0.0)) });
    }
    EXPECT_LT(worst, 1e-8) << "t=" << t;
  }
}

TEST(GpPosterior, PriorFarFromData) {
  const auto x = DenseMatrix::from_rows({ { 0.0 }, { 0.1 } });
  const auto p = params(2.0, { 0.05 });
  const auto m = gp_build(x, std::vector<double> { 1.0, -1.0 }, p, raw_config());
  const auto post = gp_posterior(m, std::vector<double> { 50.0 });
  EXPECT_NEAR(post.mean, 0.0, 1e-12);
  EXPECT_NEAR(post.variance, 2.0, 1e-12);
}

TEST(GpPosterior, VarianceBounds) {
  Rng rng(6);
  GpFitConfig cfg;
  cfg.lower = { -1, -1 };
  cfg.upper = { 1, 1 };
  const auto x = random_points(30, 2, -1.0, 1.0, rng);
  const auto m = gp_fit(x, targets(x), cfg);
  const auto q = random_points(500, 2, -1.0, 1.0, rng);
  for (std::size_t i = 0; i < q.rows(); ++i) {
    const double v = gp_posterior(m, q.row(i)).variance;
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, m.prior_variance() + 1e-8);
  }
}

TEST(GpPosterior, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  GpFitConfig cfg;
  cfg.lower = { -2, -2, -2 };
  cfg.upper = { 2, 2, 2 };
  const auto x = random_points(20, 3, -2.0, 2.0, rng);
  const auto m = gp_fit(x, targets(x), cfg);
  const auto q = random_points(20, 3, -2.0, 2.0, rng);
  for (std::size_t i = 0; i < q.rows(); ++i) {
    std::vector<double> xq(q.row(i).begin(), q.row(i).end());
    const auto pg = m.posterior_with_grad(xq);
    const auto p = m.posterior(xq);
    EXPECT_NEAR(pg.mean, p.mean, 1e-12 * (1 + std::abs(p.mean)));
    EXPECT_NEAR(pg.variance, p.variance, 1e-12);
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-6, keep = xq[j];
      xq[j] = keep + h;
      const auto fp = m.posterior(xq);
      xq[j] = keep - h;
      const auto fm = m.posterior(xq);
      xq[j] = keep;
      EXPECT_NEAR(pg.d_mean[j], (fp.mean - fm.mean) / (2 * h),
                  1e-5 * (1.0 + std::abs(pg.d_mean[j])));
      EXPECT_NEAR(pg.d_variance[j], (fp.variance - fm.variance) / (2 * h),
                  1e-5 * (1.0 + std::abs(pg.d_variance[j])));
    }
  }
}

// ---- log marginal likelihood ---------------------------------------------------

TEST(Lml, SinglePointCollapses) {
  const auto x = DenseMatrix::from_rows({ { 0.2 } });
  const auto p = params(3.0, { 1.0 });
  const double l11 = std::sqrt(3.0 + kDefaultJitter * 3.0);
  EXPECT_NEAR(log_marginal_likelihood(x, std::vector<double> { 0.0 }, p),
              -std::log(l11) - 0.5 * std::log(2 * std::numbers::pi), 1e-12);
}

TEST(Lml, MatchesDenseOracle) {
  Rng rng(8);
  const auto x = random_points(30, 2, 0.0, 1.0, rng);
  const auto f = targets(x);
  const auto p = params(1.4, { 0.3, 0.6 });
  Eigen::MatrixXd k(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      k(i, j) = matern52_ard(x.row(i), x.row(j), p) + (i == j ? 1.4e-10 : 0.0);
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), 30);
  const double expected = -0.5 * fv.dot(k.ldlt().solve(fv))
                          - 0.5 * std::log(k.determinant())
                          - 15.0 * std::log(2 * std::numbers::pi);
  EXPECT_NEAR(log_marginal_likelihood(x, f, p), expected, 1e-6 * std::abs(expected));
}

TEST(Lml, ShrinkingLengthscalesLowersLikelihood) {
  Rng rng(9);
  const auto x = random_points(25, 1, 0.0, 1.0, rng);
  const auto f = targets(x);
  GpFitConfig cfg;
  cfg.normalize_targets = false;
  const auto m = gp_fit(x, f, cfg);
  const double fitted = m.log_marginal_likelihood();
  for (double shrink : { 0.5, 0.1, 0.01 }) {
    auto p = m.params();
    for (double &l : p.lengthscales)
      l *= shrink;
    EXPECT_LT(log_marginal_likelihood(x, f, p), fitted) << shrink;
  }
}

// ---- expected improvement ---------------------------------------------------

TEST(NormalCdf, AccurateAndMonotone) {
  double prev = -1.0;
  for (int i = 0; i <= 1600; ++i) {
    const double z = -8.0 + 0.01 * i;
    const long double ref = 0.5L * std::erfc(-static_cast<long double>(z)
                                             / std::sqrt(2.0L));
    const double c = normal_cdf(z);
    EXPECT_NEAR(c, static_cast<double>(ref), 1e-12 * std::max(1e-300, c) + 1e-300);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-16);
}

TEST(ExpectedImprovement, NonNegativeAndZeroAtData) {
  Rng rng(10);
  GpFitConfig cfg;
  cfg.lower = { -3, -3 };
  cfg.upper = { 3, 3 };
  const auto x = random_points(30, 2, -3.0, 3.0, rng);
  const auto m = gp_fit(x, targets(x), cfg);
  const auto inc = incumbent(m);
  EXPECT_EQ(inc.f_tilde, *std::min_element(m.targets().begin(), m.targets().end()));
  for (std::size_t i = 0; i < x.rows(); ++i)
    EXPECT_LE(expected_improvement(m, x.row(i), inc).ei,
              1e-8 * std::abs(inc.f_tilde) + 1e-12);
  const auto q = random_points(2000, 2, -3.0, 3.0, rng);
  for (std::size_t i = 0; i < q.rows(); ++i)
    EXPECT_GE(expected_improvement(m, q.row(i), inc).ei, 0.0);
}

TEST(ExpectedImprovement, StandardNormalCase) {
  // far from a single zero-valued observation: m = 0 = f~, sigma = 1
  const auto x = DenseMatrix::from_rows({ { 0.0 } });
  const auto m = gp_build(x, std::vector<double> { 0.0 }, params(1.0, { 0.01 }),
                          raw_config());
  const auto ei = expected_improvement(m, std::vector<double> { 10.0 }, incumbent(m));
  EXPECT_NEAR(ei.ei, 0.39894, 1e-5);

  Rng rng(11);
  std::normal_distribution<double> nd;
  double s = 0.0, s2 = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double v = std::max(-nd(rng), 0.0);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
  EXPECT_LE(std::abs(ei.ei - mean), 3 * se);
}

TEST(ExpectedImprovement, MatchesMonteCarloDefinition) {
  Rng rng(12);
  GpFitConfig cfg;
  cfg.lower = { -2, -2 };
  cfg.upper = { 2, 2 };
  const auto x = random_points(15, 2, -2.0, 2.0, rng);
  const auto m = gp_fit(x, targets(x), cfg);
  const auto inc = incumbent(m);
  const auto q = random_points(20, 2, -2.0, 2.0, rng);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    const auto post = gp_posterior(m, q.row(i));
    const double sd = std::sqrt(post.variance);
    double s = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) {
      const double v = std::max(inc.f_tilde - (post.mean + sd * nd(rng)), 0.0);
      s += v;
    }
    const double mean = s / n;
    // The standard error comes from the exact second moment of the
    // improvement; a run with no improving draws would otherwise report 0.
    const double z = (inc.f_tilde - post.mean) / sd;
    const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
    const double m1 = sd * (z * cdf + pdf);
    const double m2 = sd * sd * ((z * z + 1) * cdf + z * pdf);
    const double se = std::sqrt(std::max(m2 - m1 * m1, 0.0) / n);
    EXPECT_LE(std::abs(expected_improvement(m, q.row(i), inc).ei - mean), 3 * se)
        << "point " << i;
  }
}

TEST(ExpectedImprovement, GradientMatchesFiniteDifferences) {
  Rng rng(13);
  GpFitConfig cfg;
  cfg.lower = { -2, -2, -2 };
  cfg.upper = { 2, 2, 2 };
  const auto x = random_points(25, 3, -2.0, 2.0, rng);
  const auto m = gp_fit(x, targets(x), cfg);
  const auto inc = incumbent(m);
  int checked = 0;
  while (checked < 50) {
    const auto q = random_points(1, 3, -2.0, 2.0, rng);
    std::vector<double> xq(q.row(0).begin(), q.row(0).end());
    const auto e = expected_improvement(m, xq, inc);
    if (e.ei < 1e-6)
      continue;  // flat region, relative error is meaningless
    std::vector<double> fd(3);
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-6, keep = xq[j];
      xq[j] = keep + h;
      const double fp = expected_improvement(m, xq, inc).ei;
      xq[j] = keep - h;
      const double fm = expected_improvement(m, xq, inc).ei;
      xq[j] = keep;
      fd[j] = (fp - fm) / (2 * h);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      num += (e.grad[j] - fd[j]) * (e.grad[j] - fd[j]);
      den += fd[j] * fd[j];
    }
    EXPECT_LT(std::sqrt(num) / std::max(std::sqrt(den), 1e-8), 1e-4);
    ++checked;
  }
}
