//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "gennes/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "gennes/error.hpp"
#include "gennes/problem.hpp"

namespace gennes {

namespace {
  const double kSqrt5 = std::sqrt(5.0);
  const double kLog2Pi = std::log(2.0 * std::numbers::pi);

  double scaled_sqdist(std::span<const double> x, std::span<const double> x2,
                       const KernelParams &p) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double t = (x[j] - x2[j]) / p.lengthscales[j];
      r2 += t * t;
    }
    return r2;
  }

  DenseMatrix gram(const DenseMatrix &x, const KernelParams &p) {
    const std::size_t t = x.rows();
    DenseMatrix k(t, t);
    for (std::size_t i = 0; i < t; ++i) {
      k(i, i) = p.signal_variance;
      for (std::size_t j = 0; j < i; ++j) {
        const double v = matern52_ard(x.row(i), x.row(j), p);
        k(i, j) = v;
        k(j, i) = v;
      }
    }
    return k;
  }

  struct Factorized {
    CholeskyFactor chol;
    std::vector<double> alpha;
    double lml;
  };

  Factorized factorize(const DenseMatrix &x, std::span<const double> f,
                       const KernelParams &p) {
    Factorized r;
    r.chol = cholesky(gram(x, p), kDefaultJitter * p.signal_variance);
    r.alpha = solve_psd(r.chol, f);
    double logdet = 0.0;
    for (std::size_t i = 0; i < r.chol.dim(); ++i)
      logdet += std::log(r.chol.lower(i, i));
    r.lml = -0.5 * dot(f, r.alpha) - logdet
            - 0.5 * static_cast<double>(f.size()) * kLog2Pi;
    return r;
  }

  void check_data(const DenseMatrix &x, std::span<const double> f) {
    if (x.rows() < 1)
      throw std::invalid_argument("gp: at least one training point required");
    if (f.size() != x.rows())
      throw DimensionMismatch("gp: " + std::to_string(x.rows())
                              + " inputs but " + std::to_string(f.size())
                              + " targets");
  }

  void check_duplicates(const DenseMatrix &x) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double diff = 0.0;
        for (std::size_t k = 0; k < x.cols(); ++k)
          diff = std::max(diff, std::abs(x(i, k) - x(j, k)));
        if (diff <= 1e-10)
          throw DuplicatePoints("gp: rows " + std::to_string(j) + " and "
                                + std::to_string(i) + " coincide");
      }
    }
  }

  // Bounds of the log-parameter search.
  constexpr double kLogSf2Min = -9.2, kLogSf2Max = 9.2;  // ~[1e-4, 1e4]
  constexpr double kLogEllMin = -6.9, kLogEllMax = 6.9;  // ~[1e-3, 1e3]

  KernelParams from_log(const gsl_vector *v, std::size_t d) {
    KernelParams p;
    p.signal_variance = std::exp(gsl_vector_get(v, 0));
    p.lengthscales.resize(d);
    for (std::size_t j = 0; j < d; ++j)
      p.lengthscales[j] = std::exp(gsl_vector_get(v, j + 1));
    return p;
  }

  struct NmContext {
    const DenseMatrix *x;
    std::span<const double> f;
    const GpFitConfig *cfg;
    KernelParams best;
    double best_lml = -std::numeric_limits<double>::infinity();
  };

  double negative_lml(const gsl_vector *v, void *raw) {
    auto &ctx = *static_cast<NmContext *>(raw);
    const std::size_t d = ctx.x->cols();
    double penalty = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      const double lo = i == 0 ? kLogSf2Min : kLogEllMin;
      const double hi = i == 0 ? kLogSf2Max : kLogEllMax;
      const double vi = gsl_vector_get(v, i);
      if (!std::isfinite(vi))
        return 1e300;
      penalty += std::max(0.0, lo - vi) + std::max(0.0, vi - hi);
    }
    if (penalty > 0.0)
      return 1e10 * (1.0 + penalty);

    const KernelParams p = from_log(v, d);
    double lml;
    try {
      lml = factorize(*ctx.x, ctx.f, p).lml;
    } catch (const NotPositiveDefinite &) {
      return 1e10;
    }
    if (!std::isfinite(lml))
      return 1e10;
    if (ctx.cfg->on_candidate)
      ctx.cfg->on_candidate(p, lml);
    if (lml > ctx.best_lml) {
      ctx.best_lml = lml;
      ctx.best = p;
    }
    return -lml;
  }

  void nelder_mead(NmContext &ctx, const std::vector<double> &start,
                   std::size_t iterations) {
    const std::size_t n = start.size();
    gsl_vector *x0 = gsl_vector_alloc(n);
    gsl_vector *step = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
      gsl_vector_set(x0, i, start[i]);
      gsl_vector_set(step, i, 1.0);
    }

    gsl_multimin_function fn;
    fn.n = n;
    fn.f = &negative_lml;
    fn.params = &ctx;

    gsl_multimin_fminimizer *s =
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x0, step);
    for (std::size_t it = 0; it < iterations; ++it) {
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS)
        break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-6)
          == GSL_SUCCESS)
        break;
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x0);
  }

  std::vector<double> to_log(const KernelParams &p) {
    std::vector<double> v { std::log(p.signal_variance) };
    for (double l : p.lengthscales)
      v.push_back(std::log(l));
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = std::clamp(v[i], i == 0 ? kLogSf2Min : kLogEllMin,
                        i == 0 ? kLogSf2Max : kLogEllMax);
    return v;
  }
}  // namespace

void KernelParams::validate() const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
    throw std::invalid_argument("kernel: signal variance must be positive");
  for (double l : lengthscales)
    if (!(l > 0.0) || !std::isfinite(l))
      throw std::invalid_argument("kernel: lengthscales must be positive");
}

double matern52_ard(std::span<const double> x, std::span<const double> x2,
                    const KernelParams &params) {
  const double r = std::sqrt(scaled_sqdist(x, x2, params));
  const double sr = kSqrt5 * r;
  return params.signal_variance * (1.0 + sr + sr * sr / 3.0) * std::exp(-sr);
}

double matern52_ard_grad(std::span<const double> x, std::span<const double> x2,
                         const KernelParams &params, std::span<double> grad_x) {
  const double r = std::sqrt(scaled_sqdist(x, x2, params));
  const double sr = kSqrt5 * r;
  const double e = std::exp(-sr);
  // dk/dx_j = -sf2 * 5/3 * (1 + sqrt5 r) e^{-sqrt5 r} (x_j - x2_j) / l_j^2
  const double c = -params.signal_variance * (5.0 / 3.0) * (1.0 + sr) * e;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double l = params.lengthscales[j];
    grad_x[j] = c * (x[j] - x2[j]) / (l * l);
  }
  return params.signal_variance * (1.0 + sr + sr * sr / 3.0) * e;
}

double log_marginal_likelihood(const DenseMatrix &x, std::span<const double> f,
                               const KernelParams &params) {
  check_data(x, f);
  params.validate();
  return factorize(x, f, params).lml;
}

void GpModel::to_unit(std::span<const double> x, std::span<double> out) const {
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = (x[j] - in_lo_[j]) / in_range_[j];
}

double GpModel::prior_variance() const {
  return params_.signal_variance * y_scale_ * y_scale_;
}

double GpModel::variance_floor() const {
  return kSigmaFloor * kSigmaFloor + 10.0 * chol_.jitter * y_scale_ * y_scale_;
}

PosteriorGrad GpModel::posterior_with_grad(std::span<const double> x) const {
  const std::size_t d = dim(), t = size();
  if (x.size() != d)
    throw DimensionMismatch("gp: query has length " + std::to_string(x.size()));

  std::vector<double> xu(d);
  to_unit(x, xu);

  std::vector<double> k(t);
  DenseMatrix jac(t, d);
  for (std::size_t i = 0; i < t; ++i)
    k[i] = matern52_ard_grad(xu, x_unit_.row(i), params_, jac.row(i));

  const auto v = solve_lower(chol_, k);
  const auto w = solve_upper(chol_, v);

  PosteriorGrad r;
  r.mean = y_offset_ + y_scale_ * dot(k, alpha_);
  r.variance = std::max(params_.signal_variance - dot(v, v), 0.0) * y_scale_
               * y_scale_;
  r.d_mean.assign(d, 0.0);
  r.d_variance.assign(d, 0.0);
  for (std::size_t i = 0; i < t; ++i) {
    const auto ji = jac.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      r.d_mean[j] += ji[j] * alpha_[i];
      r.d_variance[j] -= 2.0 * ji[j] * w[i];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    r.d_mean[j] *= y_scale_ / in_range_[j];
    r.d_variance[j] *= y_scale_ * y_scale_ / in_range_[j];
  }
  return r;
}

Posterior GpModel::posterior(std::span<const double> x) const {
  const std::size_t d = dim(), t = size();
  if (x.size() != d)
    throw DimensionMismatch("gp: query has length " + std::to_string(x.size()));

  std::vector<double> xu(d);
  to_unit(x, xu);
  std::vector<double> k(t);
  for (std::size_t i = 0; i < t; ++i)
    k[i] = matern52_ard(xu, x_unit_.row(i), params_);
  const auto v = solve_lower(chol_, k);
  return { y_offset_ + y_scale_ * dot(k, alpha_),
           std::max(params_.signal_variance - dot(v, v), 0.0) * y_scale_
               * y_scale_ };
}

Posterior gp_posterior(const GpModel &model, std::span<const double> x) {
  return model.posterior(x);
}

GpModel gp_build(const DenseMatrix &x, std::span<const double> f,
                 const KernelParams &params, const GpFitConfig &cfg) {
  check_data(x, f);
  params.validate();
  const std::size_t d = x.cols(), t = x.rows();
  if (params.lengthscales.size() != d)
    throw DimensionMismatch("gp: expected " + std::to_string(d)
                            + " lengthscales");

  GpModel m;
  m.x_raw_ = x;
  m.f_raw_.assign(f.begin(), f.end());
  m.params_ = params;

  m.in_lo_.assign(d, 0.0);
  m.in_range_.assign(d, 1.0);
  if (!cfg.lower.empty()) {
    if (cfg.lower.size() != d || cfg.upper.size() != d)
      throw DimensionMismatch("gp: input box has wrong dimension");
    for (std::size_t j = 0; j < d; ++j) {
      m.in_lo_[j] = cfg.lower[j];
      m.in_range_[j] = cfg.upper[j] - cfg.lower[j];
    }
  }
  m.x_unit_ = DenseMatrix(t, d);
  for (std::size_t i = 0; i < t; ++i)
    m.to_unit(x.row(i), m.x_unit_.row(i));

  std::vector<double> y(f.begin(), f.end());
  if (cfg.normalize_targets) {
    double mean = 0.0;
    for (double v : y)
      mean += v;
    mean /= static_cast<double>(t);
    double var = 0.0;
    for (double v : y)
      var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(t));
    m.y_offset_ = mean;
    m.y_scale_ = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
    for (double &v : y)
      v = (v - m.y_offset_) / m.y_scale_;
  }

  auto fz = factorize(m.x_unit_, y, params);
  m.chol_ = std::move(fz.chol);
  m.alpha_ = std::move(fz.alpha);
  m.lml_ = fz.lml;
  return m;
}

GpModel gp_fit(const DenseMatrix &x, std::span<const double> f,
               const GpFitConfig &cfg) {
  check_data(x, f);
  check_duplicates(x);
  const std::size_t d = x.cols();

  KernelParams start0;
  start0.signal_variance = 1.0;
  start0.lengthscales.assign(d, 0.5);
  if (!cfg.optimize)
    return gp_build(x, f, cfg.initial ? *cfg.initial : start0, cfg);

  // Fit on the same normalized data the model will use.
  const GpModel shape = gp_build(x, f, start0, cfg);
  std::vector<double> y(f.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = (f[i] - shape.target_offset()) / shape.target_scale();
  DenseMatrix xu(x.rows(), d);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      xu(i, j) = cfg.lower.empty() ? x(i, j)
                                   : (x(i, j) - cfg.lower[j])
                                         / (cfg.upper[j] - cfg.lower[j]);

  NmContext ctx { &xu, y, &cfg, start0, -std::numeric_limits<double>::infinity() };

  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> log_sf2(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> log_ell(std::log(0.05), std::log(5.0));

  const std::size_t restarts = std::max<std::size_t>(cfg.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<double> start;
    if (r == 0) {
      start = to_log(start0);
    } else if (r == 1 && cfg.initial) {
      start = to_log(*cfg.initial);
    } else {
      start.push_back(log_sf2(rng));
      for (std::size_t j = 0; j < d; ++j)
        start.push_back(log_ell(rng));
    }
    nelder_mead(ctx, start, cfg.iterations);
  }

  if (!std::isfinite(ctx.best_lml))
    throw NotPositiveDefinite("gp: no hyperparameter candidate could be "
                              "factorized");
  return gp_build(x, f, ctx.best, cfg);
}

Incumbent incumbent(const GpModel &model) {
  const auto &f = model.targets();
  const auto it = std::min_element(f.begin(), f.end());
  const std::size_t i = static_cast<std::size_t>(it - f.begin());
  const auto row = model.inputs().row(i);
  return { *it, std::vector<double>(row.begin(), row.end()) };
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

ExpectedImprovement expected_improvement(const GpModel &model,
                                         std::span<const double> x,
                                         const Incumbent &inc) {
  const PosteriorGrad p = model.posterior_with_grad(x);
  const std::size_t d = x.size();
  ExpectedImprovement r { 0.0, std::vector<double>(d, 0.0) };

  const double gap = inc.f_tilde - p.mean;
  if (p.variance <= model.variance_floor()) {
    if (gap > 0.0) {
      r.ei = gap;
      for (std::size_t j = 0; j < d; ++j)
        r.grad[j] = -p.d_mean[j];
    }
    return r;
  }

  const double sigma = std::sqrt(p.variance);
  const double z = gap / sigma;
  const double cdf = normal_cdf(z), pdf = normal_pdf(z);
  r.ei = std::max(sigma * (z * cdf + pdf), 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const double d_sigma = p.d_variance[j] / (2.0 * sigma);
    r.grad[j] = -cdf * p.d_mean[j] + pdf * d_sigma;
  }
  return r;
}

}  // namespace gennes
