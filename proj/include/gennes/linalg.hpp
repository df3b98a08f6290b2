//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_LINALG_HPP
#define GENNES_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace gennes {

/// Dense row-major matrix of doubles.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) { }

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<double>> &rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double &operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return { data_.data() + i * cols_, cols_ };
  }
  std::span<const double> row(std::size_t i) const {
    return { data_.data() + i * cols_, cols_ };
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Appends one row; its length must equal cols() (or define it when empty).
  void append_row(std::span<const double> values);

  bool operator==(const DenseMatrix &) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix multiply(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix transpose(const DenseMatrix &a);

/// Lower-triangular factor L with L * L^T = A + jitter * I.
struct CholeskyFactor {
  DenseMatrix lower;
  double jitter = 0.0;

  std::size_t dim() const { return lower.rows(); }
};

inline constexpr double kDefaultJitter = 1e-10;
inline constexpr int kMaxJitterEscalations = 6;

/// Factorizes a symmetric positive-definite matrix. On failure the diagonal
/// jitter is multiplied by 10 (starting at 1e-10 times the mean diagonal
/// when `jitter_start` is zero), for at most six escalations.
///
/// Throws NotSymmetric if `m` is not symmetric within 1e-12 relative to its
/// largest entry, NotPositiveDefinite if every escalation fails.
CholeskyFactor cholesky(const DenseMatrix &m,
                        double jitter_start = kDefaultJitter);

/// Solves (L L^T) x = b.
std::vector<double> solve_psd(const CholeskyFactor &f,
                              std::span<const double> b);

/// Forward substitution: returns L^{-1} b.
std::vector<double> solve_lower(const CholeskyFactor &f,
                                std::span<const double> b);

/// Back substitution: returns L^{-T} b.
std::vector<double> solve_upper(const CholeskyFactor &f,
                                std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);

}  // namespace gennes

#endif  // GENNES_LINALG_HPP
