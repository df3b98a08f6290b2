//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "gennes/objectives.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gennes/error.hpp"

namespace gennes {

namespace {
  constexpr double kPi = std::numbers::pi;
  constexpr double kE = std::numbers::e;

  template <class F>
  double golden_section_argmin(F &&f, double a, double b, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = f(d);
      }
    }
    return 0.5 * (a + b);
  }

  double styblinski_term(double t) {
    return 0.5 * (t * t * t * t - 16.0 * t * t + 5.0 * t);
  }

  double schwefel_term(double t) {
    return t * std::sin(std::sqrt(std::abs(t)));
  }

  struct Constants {
    double styb_argmin;
    double styb_offset;
    double schw_argmin;
    double schw_constant;
  };

  const Constants &constants() {
    static const Constants c = [] {
      Constants k {};
      k.styb_argmin = golden_section_argmin(styblinski_term, -4.0, -2.0, 1e-12);
      k.styb_offset = -styblinski_term(k.styb_argmin);
      k.schw_argmin = golden_section_argmin(
          [](double t) { return -schwefel_term(t); }, 400.0, 450.0, 1e-12);
      k.schw_constant = schwefel_term(k.schw_argmin);
      return k;
    }();
    return c;
  }

  double sign(double v) { return (v > 0.0) - (v < 0.0); }
}  // namespace

double styblinski_offset() { return constants().styb_offset; }
double styblinski_argmin() { return constants().styb_argmin; }
double schwefel_constant() { return constants().schw_constant; }
double schwefel_argmin() { return constants().schw_argmin; }

std::string_view objective_name(ObjectiveKind kind) {
  switch (kind) {
  case ObjectiveKind::Rastrigin:
    return "rastrigin";
  case ObjectiveKind::Ackley:
    return "ackley";
  case ObjectiveKind::Styblinski:
    return "styblinski";
  case ObjectiveKind::Schwefel:
    return "schwefel";
  case ObjectiveKind::Alpine1:
    return "alpine1";
  case ObjectiveKind::Sphere:
    return "sphere";
  }
  return "unknown";
}

std::optional<ObjectiveKind> parse_objective_kind(std::string_view name) {
  for (auto k : { ObjectiveKind::Rastrigin, ObjectiveKind::Ackley,
                  ObjectiveKind::Styblinski, ObjectiveKind::Schwefel,
                  ObjectiveKind::Alpine1, ObjectiveKind::Sphere })
    if (objective_name(k) == name)
      return k;
  return std::nullopt;
}

std::string_view alpine1_variant_name(Alpine1Variant v) {
  return v == Alpine1Variant::Paper ? "paper" : "sum_abs";
}

std::optional<Alpine1Variant> parse_alpine1_variant(std::string_view name) {
  if (name == "paper")
    return Alpine1Variant::Paper;
  if (name == "sum_abs")
    return Alpine1Variant::SumAbs;
  return std::nullopt;
}

Interval objective_domain(ObjectiveKind kind) {
  switch (kind) {
  case ObjectiveKind::Rastrigin:
    return { -3.0, 3.0 };
  case ObjectiveKind::Ackley:
  case ObjectiveKind::Styblinski:
  case ObjectiveKind::Alpine1:
    return { -10.0, 10.0 };
  case ObjectiveKind::Schwefel:
    return { -500.0, 500.0 };
  case ObjectiveKind::Sphere:
    return { -5.0, 5.0 };
  }
  return { 0.0, 0.0 };
}

double default_shift_margin(ObjectiveKind kind) {
  switch (kind) {
  case ObjectiveKind::Rastrigin:
  case ObjectiveKind::Sphere:
    return 0.5;
  case ObjectiveKind::Ackley:
  case ObjectiveKind::Alpine1:
    return 1.0;
  case ObjectiveKind::Styblinski:
    // minimizer sits at shift - 2.9035
    return 3.0;
  case ObjectiveKind::Schwefel:
    // |shift| <= 20 keeps t sin(sqrt|t|) below its in-box maximum
    return 480.0;
  }
  return 0.0;
}

Objective make_objective(ObjectiveKind kind, std::size_t dim,
                         std::vector<double> shift, Alpine1Variant variant) {
  if (dim == 0)
    throw std::invalid_argument("objective dimension must be at least 1");
  if (shift.size() != dim)
    throw DimensionMismatch("shift has length " + std::to_string(shift.size())
                            + ", expected " + std::to_string(dim));

  const Interval dom = objective_domain(kind);
  for (std::size_t i = 0; i < dim; ++i)
    if (!dom.contains(shift[i]))
      throw ShiftOutOfDomain("shift coordinate " + std::to_string(i) + " = "
                             + std::to_string(shift[i]) + " lies outside ["
                             + std::to_string(dom.lo) + ", "
                             + std::to_string(dom.hi) + "]");

  Objective o;
  o.kind_ = kind;
  o.domain_ = dom;
  o.shift_ = std::move(shift);
  o.variant_ = variant;
  return o;
}

Objective make_objective(ObjectiveKind kind, std::size_t dim,
                         Alpine1Variant variant) {
  return make_objective(kind, dim, std::vector<double>(dim, 0.0), variant);
}

double Objective::value(std::span<const double> x) const {
  return value_and_gradient(x, {});
}

double Objective::value_and_gradient(std::span<const double> x,
                                     std::span<double> grad) const {
  const std::size_t d = dim();
  if (x.size() != d)
    throw DimensionMismatch("objective queried with a vector of length "
                            + std::to_string(x.size()));
  const bool want_grad = !grad.empty();
  const auto t = [&](std::size_t i) { return x[i] - shift_[i]; };

  switch (kind_) {
  case ObjectiveKind::Sphere: {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double ti = t(i);
      s += ti * ti;
      if (want_grad)
        grad[i] = 2.0 * ti;
    }
    return s;
  }

  case ObjectiveKind::Rastrigin: {
    double s = 10.0 * static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double ti = t(i);
      s += ti * ti - 10.0 * std::cos(2.0 * kPi * ti);
      if (want_grad)
        grad[i] = 2.0 * ti + 20.0 * kPi * std::sin(2.0 * kPi * ti);
    }
    return s;
  }

  case ObjectiveKind::Ackley: {
    const double inv_d = 1.0 / static_cast<double>(d);
    double sq = 0.0, cs = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double ti = t(i);
      sq += ti * ti;
      cs += std::cos(2.0 * kPi * ti);
    }
    const double r = std::sqrt(sq * inv_d);
    const double e1 = std::exp(-0.2 * r);
    const double e2 = std::exp(cs * inv_d);
    if (want_grad) {
      // the cone at r = 0 has no gradient; report 0 there
      const double c1 = r > 0.0 ? 4.0 * e1 * inv_d / r : 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double ti = t(i);
        grad[i] = c1 * ti + e2 * 2.0 * kPi * std::sin(2.0 * kPi * ti) * inv_d;
      }
    }
    return -20.0 * e1 - e2 + 20.0 + kE;
  }

  case ObjectiveKind::Styblinski: {
    double s = styblinski_offset() * static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double ti = t(i);
      s += styblinski_term(ti);
      if (want_grad)
        grad[i] = 2.0 * ti * ti * ti - 16.0 * ti + 2.5;
    }
    return s;
  }

  case ObjectiveKind::Schwefel: {
    double s = schwefel_constant() * static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double ti = t(i);
      const double root = std::sqrt(std::abs(ti));
      s -= ti * std::sin(root);
      if (want_grad)
        grad[i] = -std::sin(root) - 0.5 * root * std::cos(root);
    }
    return s;
  }

  case ObjectiveKind::Alpine1: {
    if (variant_ == Alpine1Variant::SumAbs) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double ti = t(i);
        const double u = ti * std::sin(ti) + 0.1 * ti;
        s += std::abs(u);
        if (want_grad)
          grad[i] = sign(u) * (std::sin(ti) + ti * std::cos(ti) + 0.1);
      }
      return s;
    }

    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double ti = t(i);
      s += ti * std::sin(ti) + 0.1 * ti;
    }
    if (want_grad) {
      const double sg = sign(s);
      for (std::size_t i = 0; i < d; ++i) {
        const double ti = t(i);
        grad[i] = sg * (std::sin(ti) + ti * std::cos(ti) + 0.1);
      }
    }
    return std::abs(s);
  }
  }
  return 0.0;
}

std::vector<double> Objective::optimizer() const {
  std::vector<double> x = shift_;
  double offset = 0.0;
  if (kind_ == ObjectiveKind::Styblinski)
    offset = styblinski_argmin();
  else if (kind_ == ObjectiveKind::Schwefel)
    offset = schwefel_argmin();
  for (double &v : x)
    v += offset;
  return x;
}

Problem Objective::problem() const {
  Problem p;
  p.lower.assign(dim(), domain_.lo);
  p.upper.assign(dim(), domain_.hi);
  p.evaluate = [obj = *this](std::span<const double> x, std::span<double> g) {
    return obj.value_and_gradient(x, g);
  };
  return p;
}

ValueAndGradient eval_with_grad(const Objective &obj,
                                std::span<const double> x, BudgetMeter &meter) {
  if (x.size() != obj.dim())
    throw DimensionMismatch("query has length " + std::to_string(x.size())
                            + ", objective dimension is "
                            + std::to_string(obj.dim()));
  meter.charge(meter.grad_cost());
  ValueAndGradient r { 0.0, std::vector<double>(obj.dim()) };
  r.value = obj.value_and_gradient(x, r.grad);
  return r;
}

std::vector<double> sample_shift(Rng &rng, ObjectiveKind kind, std::size_t dim,
                                 double margin) {
  const Interval dom = objective_domain(kind);
  const double lo = dom.lo + margin, hi = dom.hi - margin;
  std::vector<double> s(dim);
  if (!(lo < hi)) {
    s.assign(dim, dom.center());
    return s;
  }
  std::uniform_real_distribution<double> u(lo, hi);
  for (double &v : s)
    v = u(rng);
  return s;
}

}  // namespace gennes
