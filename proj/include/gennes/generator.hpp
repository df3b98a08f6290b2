//
// gennes-opt - Copyright 2026 The gennes-opt Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GENNES_GENERATOR_HPP
#define GENNES_GENERATOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gennes/linalg.hpp"
#include "gennes/problem.hpp"

namespace gennes {

/// Objective-independent generator hyperparameters. Zero-valued entries
/// marked "auto" are resolved against the output box.
struct GeneratorSettings {
  std::size_t noise_dim = 0;  // auto: output dimension
  std::size_t hidden_width = 64;
  std::size_t hidden_layers = 5;
  double leaky_slope = 0.2;
  double target_out_std = 0.0;  // auto: an eighth of each box width
  double noise_halfwidth = 1.0;
  double anneal_alpha = 0.99;
  bool calibrate_init = true;
};

struct GeneratorConfig {
  std::size_t noise_dim = 1;
  std::size_t hidden_width = 64;
  std::size_t hidden_layers = 5;
  double leaky_slope = 0.2;
  std::vector<double> out_lo;
  std::vector<double> out_hi;
  /// Desired initial output std per coordinate, in output units.
  std::vector<double> target_out_std;
  double noise_halfwidth = 1.0;
  double anneal_alpha = 0.99;
  /// Rescale last-layer rows on a pilot batch after the closed-form draw.
  bool calibrate_init = true;

  std::size_t out_dim() const { return out_lo.size(); }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

GeneratorConfig make_generator_config(const GeneratorSettings &s,
                                      std::span<const double> lo,
                                      std::span<const double> hi);

/// Std of the final-layer weights that yields a pre-activation output std of
/// `beta` for a uniform noise of std `nu`, pushed through `n` rectifier
/// layers of width `h`: lambda = beta / (nu * sqrt(h * 0.3^n)).
double safe_last_layer_std(double beta, std::size_t h, std::size_t n,
                           double nu);

/// Fully connected generator: `hidden_layers` leaky-ReLU layers of width
/// `hidden_width`, then a tanh layer of width `out_dim` followed by the
/// affine map of [-1, 1] onto [out_lo, out_hi].
///
/// All weights and biases live in one flat parameter vector; layer l stores
/// its row-major (fan_out x fan_in) weight block followed by its bias.
class GeneratorNetwork {
public:
  explicit GeneratorNetwork(GeneratorConfig cfg);

  const GeneratorConfig &config() const { return cfg_; }
  std::size_t num_layers() const { return layers_.size(); }
  std::size_t num_params() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::size_t fan_in(std::size_t layer) const { return layers_[layer].in; }
  std::size_t fan_out(std::size_t layer) const { return layers_[layer].out; }
  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;

  /// Maps each noise row to a point inside the output box.
  DenseMatrix forward(const DenseMatrix &u) const;

  /// Gradient of (1/N) sum_i f(x(theta, u_i)) with respect to every
  /// parameter, given grad_f row i = grad f at forward(u) row i.
  /// Throws ShapeMismatch on inconsistent shapes.
  std::vector<double> backward(const DenseMatrix &u,
                               const DenseMatrix &grad_f) const;

  /// Scales each last-layer weight row so that the std of that output
  /// coordinate over `u` equals target_out_std, or comes as close as the
  /// row's mean offset allows.
  void calibrate_output_std(const DenseMatrix &u);

private:
  struct Layer {
    std::size_t in;
    std::size_t out;
    std::size_t offset;  // start of the weight block in params_
  };

  struct Activations {
    std::vector<DenseMatrix> pre;   // pre-activation of every layer
    std::vector<DenseMatrix> post;  // post-activation, post[L-1] = tanh
  };

  Activations run(const DenseMatrix &u) const;
  DenseMatrix to_output(const DenseMatrix &tanh_out) const;

  GeneratorConfig cfg_;
  std::vector<Layer> layers_;
  std::vector<double> params_;
};

/// Noise batch size used by init_generator for calibrate_output_std.
inline constexpr std::size_t kCalibrationBatch = 1024;

/// Hidden weights ~ N(0, 1/fan_in); last-layer weights of output j ~
/// N(0, lambda_j^2) with lambda_j from safe_last_layer_std; biases zero.
/// With calibrate_init the last-layer rows are then rescaled.

GeneratorNetwork init_generator(const GeneratorConfig &cfg, Rng &rng);

/// N x noise_dim matrix, entries uniform on [-w_t, w_t] where
/// w_t = anneal_alpha^t * noise_halfwidth.
DenseMatrix sample_noise(const GeneratorConfig &cfg, Rng &rng,
                         std::uint64_t t, std::size_t batch);

double noise_support(const GeneratorConfig &cfg, std::uint64_t t);

struct AdamState {
  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double epsilon = 1e-8;

  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) { }
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<double> params, AdamState &state,
               std::span<const double> grad, double learning_rate);

inline void adam_step(GeneratorNetwork &g, AdamState &state,
                      std::span<const double> grad, double learning_rate) {
  adam_step(g.params(), state, grad, learning_rate);
}

}  // namespace gennes

#endif  // GENNES_GENERATOR_HPP
