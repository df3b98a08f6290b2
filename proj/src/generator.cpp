//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "gennes/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gennes/error.hpp"

namespace gennes {

void GeneratorConfig::validate() const {
  if (noise_dim < 1)
    throw std::invalid_argument("generator: noise_dim must be >= 1");
  if (hidden_width < 1)
    throw std::invalid_argument("generator: hidden_width must be >= 1");
  if (hidden_layers < 1)
    throw std::invalid_argument("generator: hidden_layers must be >= 1");
  if (out_lo.empty() || out_lo.size() != out_hi.size())
    throw std::invalid_argument("generator: output bounds are inconsistent");
  if (target_out_std.size() != out_lo.size())
    throw std::invalid_argument("generator: target_out_std has wrong length");
  for (std::size_t j = 0; j < out_lo.size(); ++j) {
    if (!(out_lo[j] < out_hi[j]))
      throw std::invalid_argument("generator: out_lo must be < out_hi");
    if (!(target_out_std[j] > 0.0))
      throw std::invalid_argument("generator: target_out_std must be > 0");
  }
  if (!(noise_halfwidth > 0.0))
    throw std::invalid_argument("generator: noise_halfwidth must be > 0");
  if (!(anneal_alpha > 0.0 && anneal_alpha <= 1.0))
    throw std::invalid_argument("generator: anneal_alpha must be in (0, 1]");
}

GeneratorConfig make_generator_config(const GeneratorSettings &s,
                                      std::span<const double> lo,
                                      std::span<const double> hi) {
  GeneratorConfig c;
  c.noise_dim = s.noise_dim > 0 ? s.noise_dim : lo.size();
  c.hidden_width = s.hidden_width;
  c.hidden_layers = s.hidden_layers;
  c.leaky_slope = s.leaky_slope;
  c.out_lo.assign(lo.begin(), lo.end());
  c.out_hi.assign(hi.begin(), hi.end());
  c.target_out_std.resize(lo.size());
  for (std::size_t j = 0; j < lo.size(); ++j)
    c.target_out_std[j] = s.target_out_std > 0.0 ? s.target_out_std
                                                 : 0.125 * (hi[j] - lo[j]);
  c.noise_halfwidth = s.noise_halfwidth;
  c.anneal_alpha = s.anneal_alpha;
  c.calibrate_init = s.calibrate_init;
  c.validate();
  return c;
}

double safe_last_layer_std(double beta, std::size_t h, std::size_t n,
                           double nu) {
  const double gain = static_cast<double>(h)
                      * std::pow(0.3, static_cast<double>(n));
  return beta / (nu * std::sqrt(gain));
}

GeneratorNetwork::GeneratorNetwork(GeneratorConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  std::size_t offset = 0;
  std::size_t in = cfg_.noise_dim;
  for (std::size_t l = 0; l <= cfg_.hidden_layers; ++l) {
    const std::size_t out =
        l < cfg_.hidden_layers ? cfg_.hidden_width : cfg_.out_dim();
    layers_.push_back({ in, out, offset });
    offset += out * in + out;
    in = out;
  }
  params_.assign(offset, 0.0);
}

std::span<double> GeneratorNetwork::weights(std::size_t layer) {
  const auto &ly = layers_.at(layer);
  return { params_.data() + ly.offset, ly.out * ly.in };
}
std::span<const double> GeneratorNetwork::weights(std::size_t layer) const {
  const auto &ly = layers_.at(layer);
  return { params_.data() + ly.offset, ly.out * ly.in };
}
std::span<double> GeneratorNetwork::bias(std::size_t layer) {
  const auto &ly = layers_.at(layer);
  return { params_.data() + ly.offset + ly.out * ly.in, ly.out };
}
std::span<const double> GeneratorNetwork::bias(std::size_t layer) const {
  const auto &ly = layers_.at(layer);
  return { params_.data() + ly.offset + ly.out * ly.in, ly.out };
}

GeneratorNetwork::Activations
GeneratorNetwork::run(const DenseMatrix &u) const {
  if (u.cols() != cfg_.noise_dim)
    throw ShapeMismatch("generator: noise has " + std::to_string(u.cols())
                        + " columns, expected "
                        + std::to_string(cfg_.noise_dim));

  const std::size_t n = u.rows();
  const std::size_t last = layers_.size() - 1;
  Activations act;
  act.pre.reserve(layers_.size());
  act.post.reserve(layers_.size());

  const DenseMatrix *input = &u;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto &ly = layers_[l];
    const auto w = weights(l);
    const auto b = bias(l);

    DenseMatrix z(n, ly.out);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = input->row(i);
      auto zi = z.row(i);
      for (std::size_t o = 0; o < ly.out; ++o) {
        const double *wo = w.data() + o * ly.in;
        double s = b[o];
        for (std::size_t k = 0; k < ly.in; ++k)
          s += wo[k] * a[k];
        zi[o] = s;
      }
    }

    DenseMatrix a = z;
    if (l < last) {
      for (double &v : a.data())
        if (v < 0.0)
          v *= cfg_.leaky_slope;
    } else {
      for (double &v : a.data())
        v = std::tanh(v);
    }
    act.pre.push_back(std::move(z));
    act.post.push_back(std::move(a));
    input = &act.post.back();
  }
  return act;
}

DenseMatrix GeneratorNetwork::to_output(const DenseMatrix &tanh_out) const {
  DenseMatrix x(tanh_out.rows(), tanh_out.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double lo = cfg_.out_lo[j], hi = cfg_.out_hi[j];
      const double v = lo + (hi - lo) * 0.5 * (tanh_out(i, j) + 1.0);
      x(i, j) = std::clamp(v, lo, hi);
    }
  }
  return x;
}

DenseMatrix GeneratorNetwork::forward(const DenseMatrix &u) const {
  const auto act = run(u);
  return to_output(act.post.back());
}

std::vector<double> GeneratorNetwork::backward(const DenseMatrix &u,
                                               const DenseMatrix &grad_f) const {
  if (grad_f.rows() != u.rows() || grad_f.cols() != cfg_.out_dim())
    throw ShapeMismatch("generator: grad_f must be " + std::to_string(u.rows())
                        + " x " + std::to_string(cfg_.out_dim()));

  const auto act = run(u);
  const std::size_t n = u.rows();
  std::vector<double> grad(params_.size(), 0.0);
  if (n == 0)
    return grad;

  // dJ/dz at the tanh layer
  const std::size_t last = layers_.size() - 1;
  const double inv_n = 1.0 / static_cast<double>(n);
  DenseMatrix delta(n, cfg_.out_dim());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cfg_.out_dim(); ++j) {
      const double t = act.post[last](i, j);
      const double half_range = 0.5 * (cfg_.out_hi[j] - cfg_.out_lo[j]);
      delta(i, j) = grad_f(i, j) * inv_n * half_range * (1.0 - t * t);
    }
  }

  for (std::size_t l = layers_.size(); l-- > 0;) {
    const auto &ly = layers_[l];
    const DenseMatrix &input = l == 0 ? u : act.post[l - 1];
    double *gw = grad.data() + ly.offset;
    double *gb = gw + ly.out * ly.in;

    for (std::size_t i = 0; i < n; ++i) {
      const auto di = delta.row(i);
      const auto a = input.row(i);
      for (std::size_t o = 0; o < ly.out; ++o) {
        const double dio = di[o];
        if (dio == 0.0)
          continue;
        double *gwo = gw + o * ly.in;
        for (std::size_t k = 0; k < ly.in; ++k)
          gwo[k] += dio * a[k];
        gb[o] += dio;
      }
    }

    if (l == 0)
      break;

    const auto w = weights(l);
    const DenseMatrix &z_prev = act.pre[l - 1];
    DenseMatrix prev(n, ly.in);
    for (std::size_t i = 0; i < n; ++i) {
      const auto di = delta.row(i);
      auto pi = prev.row(i);
      for (std::size_t o = 0; o < ly.out; ++o) {
        const double dio = di[o];
        if (dio == 0.0)
          continue;
        const double *wo = w.data() + o * ly.in;
        for (std::size_t k = 0; k < ly.in; ++k)
          pi[k] += dio * wo[k];
      }
      const auto zi = z_prev.row(i);
      for (std::size_t k = 0; k < ly.in; ++k)
        if (zi[k] < 0.0)
          pi[k] *= cfg_.leaky_slope;
    }
    delta = std::move(prev);
  }
  return grad;
}

namespace {
  double tanh_std(std::span<const double> z, double c, double b) {
    double m = 0.0, s = 0.0;
    for (double v : z)
      m += std::tanh(c * v + b);
    m /= static_cast<double>(z.size());
    for (double v : z) {
      const double t = std::tanh(c * v + b) - m;
      s += t * t;
    }
    return std::sqrt(s / static_cast<double>(z.size()));
  }
}  // namespace

void GeneratorNetwork::calibrate_output_std(const DenseMatrix &u) {
  if (u.rows() < 2)
    return;
  const auto act = run(u);
  const std::size_t last = layers_.size() - 1;
  const DenseMatrix &z = act.pre[last];
  const auto b = bias(last);
  auto w = weights(last);
  const std::size_t in = layers_[last].in;

  std::vector<double> zj(u.rows());
  for (std::size_t j = 0; j < cfg_.out_dim(); ++j) {
    for (std::size_t i = 0; i < u.rows(); ++i)
      zj[i] = z(i, j) - b[j];
    const double target =
        cfg_.target_out_std[j] / (0.5 * (cfg_.out_hi[j] - cfg_.out_lo[j]));

    // geometric scan for the first scale reaching the target, then bisect
    double lo = 0.0, hi = 0.0, best_c = 1.0, best_s = -1.0;
    for (double c = 1e-4; c <= 1e4; c *= 1.25) {
      const double s = tanh_std(zj, c, b[j]);
      if (s >= target) {
        hi = c;
        break;
      }
      if (s > best_s) {
        best_s = s;
        best_c = c;
      }
      lo = c;
    }
    double scale = best_c;
    if (hi > 0.0) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tanh_std(zj, mid, b[j]) < target ? lo : hi) = mid;
      }
      scale = 0.5 * (lo + hi);
    }
    for (std::size_t k = 0; k < in; ++k)
      w[j * in + k] *= scale;
  }
}

GeneratorNetwork init_generator(const GeneratorConfig &cfg, Rng &rng) {
  GeneratorNetwork g(cfg);
  const std::size_t last = g.num_layers() - 1;

  for (std::size_t l = 0; l < last; ++l) {
    std::normal_distribution<double> nd(
        0.0, 1.0 / std::sqrt(static_cast<double>(g.fan_in(l))));
    for (double &w : g.weights(l))
      w = nd(rng);
  }

  // The variance relation is derived for centered, identity-like outputs,
  // so beta is expressed in tanh units (half the box width maps to 1).
  const double nu = cfg.noise_halfwidth / std::sqrt(3.0);
  auto w = g.weights(last);
  const std::size_t in = g.fan_in(last);
  for (std::size_t j = 0; j < cfg.out_dim(); ++j) {
    const double half_range = 0.5 * (cfg.out_hi[j] - cfg.out_lo[j]);
    const double lambda = safe_last_layer_std(
        cfg.target_out_std[j] / half_range, cfg.hidden_width,
        cfg.hidden_layers, nu);
    std::normal_distribution<double> nd(0.0, lambda);
    for (std::size_t k = 0; k < in; ++k)
      w[j * in + k] = nd(rng);
  }

  if (cfg.calibrate_init)
    g.calibrate_output_std(sample_noise(cfg, rng, 0, kCalibrationBatch));
  return g;
}

double noise_support(const GeneratorConfig &cfg, std::uint64_t t) {
  return std::pow(cfg.anneal_alpha, static_cast<double>(t))
         * cfg.noise_halfwidth;
}

DenseMatrix sample_noise(const GeneratorConfig &cfg, Rng &rng,
                         std::uint64_t t, std::size_t batch) {
  const double w = noise_support(cfg, t);
  DenseMatrix u(batch, cfg.noise_dim);
  std::uniform_real_distribution<double> ud(-w, w);
  for (double &v : u.data())
    v = ud(rng);
  return u;
}

void adam_step(std::span<double> params, AdamState &state,
               std::span<const double> grad, double learning_rate) {
  if (grad.size() != params.size())
    throw ShapeMismatch("adam: gradient has " + std::to_string(grad.size())
                        + " entries, parameters have "
                        + std::to_string(params.size()));
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(AdamState::beta1, t);
  const double c2 = 1.0 - std::pow(AdamState::beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = AdamState::beta1 * state.m[i] + (1.0 - AdamState::beta1) * g;
    state.v[i] = AdamState::beta2 * state.v[i]
                 + (1.0 - AdamState::beta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= learning_rate * mhat / (std::sqrt(vhat) + AdamState::epsilon);
  }
}

}  // namespace gennes
