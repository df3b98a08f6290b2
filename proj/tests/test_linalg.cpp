//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gennes/error.hpp"
#include "gennes/linalg.hpp"

using namespace gennes;

namespace {

DenseMatrix random_spd(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DenseMatrix a(n, n);
  for (double &v : a.data())
    v = nd(rng);
  DenseMatrix k = multiply(transpose(a), a);
  for (std::size_t i = 0; i < n; ++i)
    k(i, i) += 1.0;
  return k;
}

double frobenius(const DenseMatrix &m) {
  double s = 0.0;
  for (double v : m.data())
    s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST(Cholesky, IdentityWithZeroJitter) {
  const auto f = cholesky(DenseMatrix::identity(3), 0.0);
  EXPECT_EQ(f.lower, DenseMatrix::identity(3));
  EXPECT_EQ(f.jitter, 0.0);
}

TEST(Cholesky, HandExpanded2x2) {
  const auto f = cholesky(DenseMatrix::from_rows({ { 4, 2 }, { 2, 3 } }), 0.0);
  EXPECT_NEAR(f.lower(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(f.lower(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(f.lower(1, 1), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(f.lower(0, 1), 0.0);
}

TEST(Cholesky, RandomSpdReconstructs) {
  const auto k = random_spd(20, 11);
  const auto f = cholesky(k);
  DenseMatrix rec = multiply(f.lower, transpose(f.lower));
  for (std::size_t i = 0; i < 20; ++i)
    rec(i, i) -= f.jitter;
  DenseMatrix diff(20, 20);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      diff(i, j) = rec(i, j) - k(i, j);
  EXPECT_LT(frobenius(diff) / frobenius(k), 1e-10);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_GT(f.lower(i, i), 0.0);
    for (std::size_t j = i + 1; j < 20; ++j)
      EXPECT_EQ(f.lower(i, j), 0.0);
  }
}

TEST(Cholesky, Deterministic) {
  const auto k = random_spd(12, 3);
  EXPECT_EQ(cholesky(k).lower, cholesky(k).lower);
}

TEST(Cholesky, RejectsAsymmetric) {
  EXPECT_THROW(cholesky(DenseMatrix::from_rows({ { 1, 0.5 }, { 0.4, 1 } })),
               NotSymmetric);
}

TEST(Cholesky, RejectsNonSquare) {
  EXPECT_THROW(cholesky(DenseMatrix(2, 3)), NotSymmetric);
}

TEST(Cholesky, SingularPsdNeedsJitter) {
  const auto f = cholesky(DenseMatrix::from_rows({ { 1, 1 }, { 1, 1 } }), 0.0);
  EXPECT_GT(f.jitter, 0.0);
  EXPECT_LE(f.jitter, 1e-10 * std::pow(10.0, kMaxJitterEscalations));
}

TEST(Cholesky, IndefiniteThrowsAfterEscalation) {
  EXPECT_THROW(cholesky(DenseMatrix::from_rows({ { 1, 0 }, { 0, -1 } })),
               NotPositiveDefinite);
}

TEST(SolvePsd, IdentityFactor) {
  const auto f = cholesky(DenseMatrix::identity(3), 0.0);
  const std::vector<double> b { 1, 2, 3 };
  EXPECT_EQ(solve_psd(f, b), b);
}

TEST(SolvePsd, TwoByTwo) {
  const auto f = cholesky(DenseMatrix::from_rows({ { 4, 2 }, { 2, 3 } }), 0.0);
  const auto x = solve_psd(f, std::vector<double> { 4, 1 });
  EXPECT_NEAR(x[0], 1.25, 1e-14);
  EXPECT_NEAR(x[1], -0.5, 1e-14);
}

TEST(SolvePsd, RandomResidual) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto k = random_spd(15, 100 + seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> b(15);
    for (double &v : b)
      v = nd(rng);
    const auto x = solve_psd(cholesky(k, 0.0), b);
    double res = 0.0;
    for (std::size_t i = 0; i < 15; ++i) {
      double s = -b[i];
      for (std::size_t j = 0; j < 15; ++j)
        s += k(i, j) * x[j];
      res = std::max(res, std::abs(s));
    }
    EXPECT_LT(res, 1e-8 * max_abs(b));
  }
}

TEST(SolvePsd, MatchesEigenLlt) {
  const auto k = random_spd(30, 77);
  Eigen::MatrixXd ek(30, 30);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j)
      ek(i, j) = k(i, j);
  Eigen::VectorXd eb = Eigen::VectorXd::LinSpaced(30, -1.0, 2.0);
  const Eigen::VectorXd ex = ek.llt().solve(eb);
  const auto x = solve_psd(cholesky(k, 0.0),
                           std::vector<double>(eb.data(), eb.data() + 30));
  for (std::size_t i = 0; i < 30; ++i)
    EXPECT_NEAR(x[i], ex[i], 1e-10 * (1.0 + std::abs(ex[i])));
}

TEST(SolvePsd, DimensionMismatch) {
  const auto f = cholesky(DenseMatrix::identity(3), 0.0);
  EXPECT_THROW(solve_psd(f, std::vector<double> { 1, 2 }), DimensionMismatch);
  EXPECT_THROW(solve_lower(f, std::vector<double> { 1 }), DimensionMismatch);
  EXPECT_THROW(solve_upper(f, std::vector<double> { 1, 2, 3, 4 }),
               DimensionMismatch);
}

TEST(DenseMatrix, AppendRowAndMultiply) {
  DenseMatrix m;
  m.append_row(std::vector<double> { 1, 2 });
  m.append_row(std::vector<double> { 3, 4 });
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_THROW(m.append_row(std::vector<double> { 1 }), DimensionMismatch);
  const auto p = multiply(m, DenseMatrix::identity(2));
  EXPECT_EQ(p, m);
  const auto t = transpose(m);
  EXPECT_EQ(t(0, 1), 3.0);
}
