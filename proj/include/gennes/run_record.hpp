//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_RUN_RECORD_HPP
#define GENNES_RUN_RECORD_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace gennes {

struct TracePoint {
  std::uint64_t evaluations;
  double best_value;

  bool operator==(const TracePoint &) const = default;
};

/// Best-so-far trace of one optimization run.
struct RunRecord {
  std::string algorithm;
  std::string objective;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<TracePoint> trace;
  std::vector<double> best_point;
  double best_value = std::numeric_limits<double>::infinity();

  bool operator==(const RunRecord &) const = default;
};

/// Tracks the incumbent over every observed query and appends trace points.
class IncumbentTracker {
public:
  void observe(std::span<const double> x, double value) {
    if (value < best_value_) {
      best_value_ = value;
      best_point_.assign(x.begin(), x.end());
    }
  }

  /// Appends (evaluations, best) unless `evaluations` did not advance.
  void mark(std::uint64_t evaluations) {
    if (best_point_.empty())
      return;
    if (!trace_.empty() && trace_.back().evaluations >= evaluations)
      return;
    trace_.push_back({ evaluations, best_value_ });
  }

  double best_value() const { return best_value_; }
  const std::vector<double> &best_point() const { return best_point_; }
  const std::vector<TracePoint> &trace() const { return trace_; }

  void fill(RunRecord &r) const {
    r.trace = trace_;
    r.best_point = best_point_;
    r.best_value = best_value_;
  }

private:
  double best_value_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_point_;
  std::vector<TracePoint> trace_;
};

}  // namespace gennes

#endif  // GENNES_RUN_RECORD_HPP
