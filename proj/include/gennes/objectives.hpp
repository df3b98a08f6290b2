//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_OBJECTIVES_HPP
#define GENNES_OBJECTIVES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gennes/problem.hpp"

namespace gennes {

enum class ObjectiveKind { Rastrigin, Ackley, Styblinski, Schwefel, Alpine1, Sphere };

/// Alpine1 as printed (|sum x sin x + 0.1x|) or the common sum-of-abs form.
enum class Alpine1Variant { Paper, SumAbs };

struct Interval {
  double lo;
  double hi;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

std::string_view objective_name(ObjectiveKind kind);
std::optional<ObjectiveKind> parse_objective_kind(std::string_view name);
std::string_view alpine1_variant_name(Alpine1Variant v);
std::optional<Alpine1Variant> parse_alpine1_variant(std::string_view name);

/// Search box of each benchmark, identical along every coordinate.
Interval objective_domain(ObjectiveKind kind);

/// Shift margin used when the experiment config does not set one. It keeps
/// the translated minimum inside the box and, for Schwefel, keeps the
/// evaluated argument away from the deeper minima outside [-500, 500].
double default_shift_margin(ObjectiveKind kind);

/// Per-dimension constant added to the Styblinski sum so its minimum is 0.
double styblinski_offset();
/// Unshifted per-coordinate minimizer of the Styblinski term.
double styblinski_argmin();
/// max_t t sin(sqrt|t|) over the Schwefel box; replaces 418.9829 * d.
double schwefel_constant();
double schwefel_argmin();

/// A benchmark function translated so its value at x is the base formula
/// applied to (x - shift). Minimum value is 0 for every kind.
class Objective {
public:
  ObjectiveKind kind() const { return kind_; }
  std::string_view name() const { return objective_name(kind_); }
  std::size_t dim() const { return shift_.size(); }
  Interval domain() const { return domain_; }
  const std::vector<double> &shift() const { return shift_; }
  double f_star() const { return 0.0; }
  Alpine1Variant alpine1_variant() const { return variant_; }

  double value(std::span<const double> x) const;
  /// Value plus analytic gradient (a subgradient at Alpine1 kinks).
  double value_and_gradient(std::span<const double> x,
                            std::span<double> grad) const;

  /// Location of the known global minimizer.
  std::vector<double> optimizer() const;

  /// Unmetered view as a Problem over the objective's box.
  Problem problem() const;

private:
  friend Objective make_objective(ObjectiveKind, std::size_t,
                                  std::vector<double>, Alpine1Variant);

  ObjectiveKind kind_ = ObjectiveKind::Sphere;
  Interval domain_ { 0.0, 0.0 };
  std::vector<double> shift_;
  Alpine1Variant variant_ = Alpine1Variant::Paper;
};

/// Throws ShiftOutOfDomain if `shift` leaves the box, DimensionMismatch if
/// its length differs from `dim`, std::invalid_argument if dim == 0.
Objective make_objective(ObjectiveKind kind, std::size_t dim,
                         std::vector<double> shift,
                         Alpine1Variant variant = Alpine1Variant::Paper);

/// Objective with zero shift.
Objective make_objective(ObjectiveKind kind, std::size_t dim,
                         Alpine1Variant variant = Alpine1Variant::Paper);

ValueAndGradient eval_with_grad(const Objective &obj,
                                std::span<const double> x, BudgetMeter &meter);

/// Uniform sample over the domain shrunk by `margin` on each side.
std::vector<double> sample_shift(Rng &rng, ObjectiveKind kind, std::size_t dim,
                                 double margin);

}  // namespace gennes

#endif  // GENNES_OBJECTIVES_HPP
