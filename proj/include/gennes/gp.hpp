//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_GP_HPP
#define GENNES_GP_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gennes/linalg.hpp"

namespace gennes {

struct KernelParams {
  double signal_variance = 1.0;
  std::vector<double> lengthscales;

  /// Throws std::invalid_argument unless every entry is positive and finite.
  void validate() const;
};

/// sf2 * (1 + sqrt5 r + 5 r^2 / 3) * exp(-sqrt5 r),
/// r^2 = sum_j (x_j - x2_j)^2 / l_j^2.
double matern52_ard(std::span<const double> x, std::span<const double> x2,
                    const KernelParams &params);

/// Kernel value plus its gradient with respect to `x`.
double matern52_ard_grad(std::span<const double> x, std::span<const double> x2,
                         const KernelParams &params, std::span<double> grad_x);

/// -1/2 f^T K^-1 f - sum_i log L_ii - t/2 log(2 pi) on the data as given.
double log_marginal_likelihood(const DenseMatrix &x, std::span<const double> f,
                               const KernelParams &params);

struct GpFitConfig {
  /// When false, `initial` is used as is.
  bool optimize = true;
  std::optional<KernelParams> initial;
  /// Nelder-Mead restarts in log-parameter space and iterations per start.
  std::size_t restarts = 4;
  std::size_t iterations = 200;
  std::uint64_t seed = 0;
  /// Input box mapped onto [0, 1]^d before fitting; empty keeps raw inputs.
  std::vector<double> lower;
  std::vector<double> upper;
  /// Standardize targets to zero mean and unit variance.
  bool normalize_targets = true;
  /// Observes every (params, LML) candidate the fitter evaluates.
  std::function<void(const KernelParams &, double)> on_candidate;
};

struct Posterior {
  double mean;
  double variance;
};

struct PosteriorGrad {
  double mean;
  double variance;
  std::vector<double> d_mean;
  std::vector<double> d_variance;
};

/// Noiseless GP regression model. Kernel parameters, Cholesky factor and
/// K^-1 f live in the normalized space; queries take and return original
/// units.
class GpModel {
public:
  const DenseMatrix &inputs() const { return x_raw_; }
  const std::vector<double> &targets() const { return f_raw_; }
  std::size_t size() const { return x_raw_.rows(); }
  std::size_t dim() const { return x_raw_.cols(); }

  /// Parameters in the normalized space.
  const KernelParams &params() const { return params_; }
  const CholeskyFactor &factor() const { return chol_; }
  const std::vector<double> &alpha() const { return alpha_; }
  double jitter() const { return chol_.jitter; }
  double log_marginal_likelihood() const { return lml_; }

  /// k(x, x) in original target units.
  double prior_variance() const;
  /// Target scale: original = target_offset + target_scale * normalized.
  double target_offset() const { return y_offset_; }
  double target_scale() const { return y_scale_; }
  /// Posterior variance below this is treated as zero by the acquisition.
  double variance_floor() const;

  Posterior posterior(std::span<const double> x) const;
  PosteriorGrad posterior_with_grad(std::span<const double> x) const;

private:
  friend GpModel gp_build(const DenseMatrix &, std::span<const double>,
                          const KernelParams &, const GpFitConfig &);

  void to_unit(std::span<const double> x, std::span<double> out) const;

  DenseMatrix x_raw_;
  std::vector<double> f_raw_;
  DenseMatrix x_unit_;
  std::vector<double> in_lo_;
  std::vector<double> in_range_;
  double y_offset_ = 0.0;
  double y_scale_ = 1.0;
  KernelParams params_;
  CholeskyFactor chol_;
  std::vector<double> alpha_;
  double lml_ = 0.0;
};

/// Builds the model for fixed kernel parameters (normalization options are
/// taken from `cfg`).
GpModel gp_build(const DenseMatrix &x, std::span<const double> f,
                 const KernelParams &params, const GpFitConfig &cfg = {});

/// Maximizes the log marginal likelihood by multi-start Nelder-Mead, then
/// builds the model. Throws DuplicatePoints if two rows coincide within
/// 1e-10, NotPositiveDefinite if no candidate can be factorized.
GpModel gp_fit(const DenseMatrix &x, std::span<const double> f,
               const GpFitConfig &cfg = {});

Posterior gp_posterior(const GpModel &model, std::span<const double> x);

struct Incumbent {
  double f_tilde;
  std::vector<double> location;
};

Incumbent incumbent(const GpModel &model);

double normal_pdf(double z);
/// Standard normal CDF via erfc.
double normal_cdf(double z);

inline constexpr double kSigmaFloor = 1e-10;

struct ExpectedImprovement {
  double ei;
  std::vector<double> grad;
};

/// EI(x) = E[max(f_tilde - y, 0)], y ~ N(m(x), s^2(x)), with its gradient.
/// When s^2 is below the model's variance floor, EI = max(f_tilde - m, 0)
/// and the gradient comes from the mean alone.
ExpectedImprovement expected_improvement(const GpModel &model,
                                         std::span<const double> x,
                                         const Incumbent &inc);

}  // namespace gennes

#endif  // GENNES_GP_HPP
