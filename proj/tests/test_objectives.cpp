//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "gennes/error.hpp"
#include "gennes/objectives.hpp"

using namespace gennes;

namespace {

constexpr ObjectiveKind kAll[] = { ObjectiveKind::Rastrigin, ObjectiveKind::Ackley,
                                   ObjectiveKind::Styblinski, ObjectiveKind::Schwefel,
                                   ObjectiveKind::Alpine1,   ObjectiveKind::Sphere };

std::vector<double> central_difference(const Objective &obj,
                                       std::vector<double> x) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = obj.value(x);
    x[i] = xi - h;
    const double fm = obj.value(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double relative_error(const std::vector<double> &a, const std::vector<double> &b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-8);
}

double alpine1_inner(const Objective &obj, const std::vector<double> &x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - obj.shift()[i];
    s += t * std::sin(t) + 0.1 * t;
  }
  return s;
}

}  // namespace

TEST(Objectives, RastriginOriginIsZero) {
  const auto obj = make_objective(ObjectiveKind::Rastrigin, 10);
  EXPECT_NEAR(obj.value(std::vector<double>(10, 0.0)), 0.0, 1e-12);
}

TEST(Objectives, AckleyOriginIsZero) {
  const auto obj = make_objective(ObjectiveKind::Ackley, 30);
  EXPECT_NEAR(obj.value(std::vector<double>(30, 0.0)), 0.0, 1e-12);
}

TEST(Objectives, SchwefelKnownOptimizer) {
  const auto obj = make_objective(ObjectiveKind::Schwefel, 10);
  EXPECT_LT(obj.value(std::vector<double>(10, 420.9687)), 1e-3);
  EXPECT_GE(obj.value(std::vector<double>(10, 420.9687)), -1e-9);
}

TEST(Objectives, SphereHandComputed) {
  const auto obj = make_objective(ObjectiveKind::Sphere, 3);
  std::vector<double> g(3);
  EXPECT_EQ(obj.value_and_gradient(std::vector<double> { 1, 2, 3 }, g), 14.0);
  EXPECT_EQ(g, (std::vector<double> { 2, 4, 6 }));
}

TEST(Objectives, RastriginSymmetricGradient) {
  const auto obj = make_objective(ObjectiveKind::Rastrigin, 2);
  std::vector<double> g(2);
  obj.value_and_gradient(std::vector<double> { 0.5, 0.0 }, g);
  EXPECT_EQ(g[1], 0.0);
}

TEST(Objectives, StyblinskiGradientTight) {
  Rng rng(4);
  const auto obj = make_objective(ObjectiveKind::Styblinski, 10);
  const Problem p = obj.problem();
  for (int k = 0; k < 20; ++k) {
    const auto x = uniform_in_box(p, rng);
    std::vector<double> g(10);
    obj.value_and_gradient(x, g);
    EXPECT_LT(relative_error(g, central_difference(obj, x)), 1e-6);
  }
}

class GradientCheck : public ::testing::TestWithParam<ObjectiveKind> { };

TEST_P(GradientCheck, MatchesCentralDifferences) {
  const ObjectiveKind kind = GetParam();
  for (std::size_t d : { 2u, 10u }) {
    Rng rng(derive_seed(17, d, objective_name(kind)));
    const auto shift = sample_shift(rng, kind, d, default_shift_margin(kind));
    const auto obj = make_objective(kind, d, shift);
    const Interval dom = obj.domain();
    std::uniform_real_distribution<double> u(dom.lo + 1e-3 * dom.width(),
                                             dom.hi - 1e-3 * dom.width());
    int checked = 0;
    while (checked < 100) {
      std::vector<double> x(d);
      for (double &v : x)
        v = u(rng);
      if (kind == ObjectiveKind::Alpine1 && std::abs(alpine1_inner(obj, x)) < 1e-3)
        continue;
      std::vector<double> g(d);
      obj.value_and_gradient(x, g);
      EXPECT_LT(relative_error(g, central_difference(obj, x)), 1e-5)
          << objective_name(kind) << " d=" << d;
      ++checked;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllObjectives, GradientCheck, ::testing::ValuesIn(kAll),
                         [](const auto &info) {
                           return std::string(objective_name(info.param));
                         });

TEST(Objectives, ShiftedOptimizerAttainsZero) {
  for (auto kind : kAll) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      const auto obj = make_objective(
          kind, 10, sample_shift(rng, kind, 10, default_shift_margin(kind)));
      const double tol = kind == ObjectiveKind::Schwefel ? 1e-3 : 1e-6;
      const double v = obj.value(obj.optimizer());
      EXPECT_LE(v, tol) << objective_name(kind);
      EXPECT_GE(v, -1e-9) << objective_name(kind);
      for (double c : obj.optimizer())
        EXPECT_TRUE(obj.domain().contains(c)) << objective_name(kind);
    }
  }
}

TEST(Objectives, SchwefelConstantMatchesGridOracle) {
  // max of t sin(sqrt t) on a 1e-5 grid around the known peak
  double best = -1.0, arg = 0.0;
  for (int i = 0; i <= 1000000; ++i) {
    const double t = 415.0 + 1e-5 * i;
    const double v = t * std::sin(std::sqrt(t));
    if (v > best) {
      best = v;
      arg = t;
    }
  }
  EXPECT_NEAR(schwefel_constant(), best, 1e-9);
  EXPECT_NEAR(schwefel_argmin(), arg, 1e-4);
  EXPECT_NEAR(schwefel_constant(), 418.9829, 1e-4);
}

TEST(Objectives, StyblinskiOffsetMatchesGridOracle) {
  double best = 1e300, arg = 0.0;
  for (int i = 0; i <= 1000000; ++i) {
    const double t = -3.0 + 2e-7 * i;
    const double v = 0.5 * (t * t * t * t - 16.0 * t * t + 5.0 * t);
    if (v < best) {
      best = v;
      arg = t;
    }
  }
  EXPECT_NEAR(styblinski_offset(), -best, 1e-9);
  EXPECT_NEAR(styblinski_argmin(), arg, 1e-5);
}

TEST(Objectives, SchwefelDefaultMarginKeepsTermsNonNegative) {
  // |shift| <= 20 means t = x - shift ranges over [-520, 520].
  const double c = schwefel_constant();
  for (int i = 0; i <= 1040000; ++i) {
    const double t = -520.0 + 1e-3 * i;
    ASSERT_GE(c - t * std::sin(std::sqrt(std::abs(t))), -1e-9) << t;
  }
  EXPECT_DOUBLE_EQ(500.0 - default_shift_margin(ObjectiveKind::Schwefel), 20.0);
}

TEST(Objectives, AlpineKinkSubgradientIsZero) {
  const auto obj = make_objective(ObjectiveKind::Alpine1, 4);
  std::vector<double> g(4, 1.0);
  EXPECT_EQ(obj.value_and_gradient(std::vector<double>(4, 0.0), g), 0.0);
  for (double v : g)
    EXPECT_EQ(v, 0.0);
}

TEST(Objectives, AlpineVariantsDiffer) {
  const std::vector<double> x { 1.0, -2.0 };
  const auto paper = make_objective(ObjectiveKind::Alpine1, 2, Alpine1Variant::Paper);
  const auto sum_abs = make_objective(ObjectiveKind::Alpine1, 2, Alpine1Variant::SumAbs);
  const double a = 1.0 * std::sin(1.0) + 0.1;
  const double b = -2.0 * std::sin(-2.0) - 0.2;
  EXPECT_NEAR(paper.value(x), std::abs(a + b), 1e-14);
  EXPECT_NEAR(sum_abs.value(x), std::abs(a) + std::abs(b), 1e-14);
}

TEST(Objectives, MakeObjectiveErrors) {
  EXPECT_THROW(make_objective(ObjectiveKind::Rastrigin, 0), std::invalid_argument);
  EXPECT_THROW(make_objective(ObjectiveKind::Rastrigin, 2, std::vector<double> { 0 }),
               DimensionMismatch);
  EXPECT_THROW(make_objective(ObjectiveKind::Rastrigin, 2,
                              std::vector<double> { 0, 3.5 }),
               ShiftOutOfDomain);
  const auto obj = make_objective(ObjectiveKind::Sphere, 2);
  EXPECT_THROW(obj.value(std::vector<double> { 1 }), DimensionMismatch);
}

TEST(Objectives, NamesRoundTrip) {
  for (auto k : kAll)
    EXPECT_EQ(parse_objective_kind(objective_name(k)), k);
  EXPECT_FALSE(parse_objective_kind("rosenbrock"));
  EXPECT_EQ(parse_alpine1_variant("sum_abs"), Alpine1Variant::SumAbs);
}

TEST(SampleShift, DegenerateMarginGivesCenter) {
  Rng rng(1);
  const auto s = sample_shift(rng, ObjectiveKind::Rastrigin, 5, 3.0);
  for (double v : s)
    EXPECT_EQ(v, 0.0);
}

TEST(SampleShift, RespectsMargin) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k)
    for (double v : sample_shift(rng, ObjectiveKind::Rastrigin, 10, 0.5)) {
      EXPECT_GE(v, -2.5);
      EXPECT_LE(v, 2.5);
    }
}

TEST(SampleShift, Deterministic) {
  Rng a(9), b(9);
  EXPECT_EQ(sample_shift(a, ObjectiveKind::Ackley, 10, 1.0),
            sample_shift(b, ObjectiveKind::Ackley, 10, 1.0));
}

TEST(Budget, ChargesJointQueryCost) {
  const auto obj = make_objective(ObjectiveKind::Sphere, 2);
  BudgetMeter meter(5, 2);
  eval_with_grad(obj, std::vector<double> { 1, 1 }, meter);
  eval_with_grad(obj, std::vector<double> { 1, 1 }, meter);
  EXPECT_EQ(meter.used(), 4u);
  EXPECT_THROW(eval_with_grad(obj, std::vector<double> { 1, 1 }, meter),
               BudgetExhausted);
  EXPECT_EQ(meter.used(), 4u);
  eval_value(obj.problem(), std::vector<double> { 0, 0 }, meter);
  EXPECT_EQ(meter.used(), 5u);
}

TEST(Budget, NonFiniteValueIsReported) {
  Problem p;
  p.lower = { 0.0 };
  p.upper = { 1.0 };
  p.evaluate = [](std::span<const double>, std::span<double>) { return NAN; };
  BudgetMeter meter(10);
  EXPECT_THROW(eval_with_grad(p, std::vector<double> { 0.5 }, meter),
               NonFiniteValue);
}

TEST(DeriveSeed, DistinctAcrossFoldsAndTags) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t fold = 0; fold < 10; ++fold)
    for (const char *tag : { "gennes", "lbfgs", "cmaes", "nes", "shift" })
      seen.insert(derive_seed(42, fold, tag));
  EXPECT_EQ(seen.size(), 50u);
  EXPECT_EQ(derive_seed(42, 3, "gennes"), derive_seed(42, 3, "gennes"));
}
