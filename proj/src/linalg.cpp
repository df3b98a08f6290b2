//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "gennes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gennes/error.hpp"

namespace gennes {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>> &rows) {
  DenseMatrix m;
  for (const auto &r : rows)
    m.append_row(r);
  return m;
}

void DenseMatrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw DimensionMismatch("append_row: expected " + std::to_string(cols_)
                            + " columns, got "
                            + std::to_string(values.size()));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

DenseMatrix multiply(const DenseMatrix &a, const DenseMatrix &b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("multiply: inner dimensions differ");

  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j)
        ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix &a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      t(j, i) = a(i, j);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a)
    m = std::max(m, std::abs(v));
  return m;
}

namespace {
  bool try_factorize(const DenseMatrix &m, double jitter, DenseMatrix &l) {
    const std::size_t n = m.rows();
    l = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = m(i, j);
        if (i == j)
          s += jitter;
        const auto li = l.row(i), lj = l.row(j);
        for (std::size_t k = 0; k < j; ++k)
          s -= li[k] * lj[k];

        if (i == j) {
          if (!(s > 0.0) || !std::isfinite(s))
            return false;
          l(i, i) = std::sqrt(s);
        } else {
          l(i, j) = s / l(j, j);
        }
      }
    }
    return true;
  }

  void check_symmetric(const DenseMatrix &m) {
    if (m.rows() != m.cols())
      throw NotSymmetric("cholesky: matrix is not square");

    const double scale = std::max(max_abs(m.data()), 1e-300);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const double diff = std::abs(m(i, j) - m(j, i));
        if (!(diff <= 1e-12 * scale))
          throw NotSymmetric("cholesky: entries (" + std::to_string(i) + ","
                             + std::to_string(j) + ") differ");
      }
    }
  }
}  // namespace

CholeskyFactor cholesky(const DenseMatrix &m, double jitter_start) {
  check_symmetric(m);

  const std::size_t n = m.rows();
  double mean_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    mean_diag += std::abs(m(i, i));
  mean_diag = n > 0 ? mean_diag / static_cast<double>(n) : 1.0;

  CholeskyFactor f;
  double jitter = std::max(jitter_start, 0.0);
  for (int attempt = 0; attempt <= kMaxJitterEscalations; ++attempt) {
    if (try_factorize(m, jitter, f.lower)) {
      f.jitter = jitter;
      return f;
    }
    jitter = jitter > 0.0 ? jitter * 10.0
                          : kDefaultJitter * std::max(mean_diag, 1e-300);
  }
  throw NotPositiveDefinite("cholesky: factorization failed after "
                            + std::to_string(kMaxJitterEscalations)
                            + " jitter escalations");
}

std::vector<double> solve_lower(const CholeskyFactor &f,
                                std::span<const double> b) {
  const std::size_t n = f.dim();
  if (b.size() != n)
    throw DimensionMismatch("solve: rhs has length " + std::to_string(b.size())
                            + ", factor has dimension " + std::to_string(n));

  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = f.lower.row(i);
    double s = y[i];
    for (std::size_t k = 0; k < i; ++k)
      s -= li[k] * y[k];
    y[i] = s / li[i];
  }
  return y;
}

std::vector<double> solve_upper(const CholeskyFactor &f,
                                std::span<const double> b) {
  const std::size_t n = f.dim();
  if (b.size() != n)
    throw DimensionMismatch("solve: rhs has length " + std::to_string(b.size())
                            + ", factor has dimension " + std::to_string(n));

  // L^T is upper triangular; walk columns of L instead of transposing.
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k)
      s -= f.lower(k, ii) * x[k];
    x[ii] = s / f.lower(ii, ii);
  }
  return x;
}

std::vector<double> solve_psd(const CholeskyFactor &f,
                              std::span<const double> b) {
  const auto y = solve_lower(f, b);
  return solve_upper(f, y);
}

}  // namespace gennes
