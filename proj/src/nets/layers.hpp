#pragma once

#include <cstddef>
#include <vector>

#include "common/rng.hpp"
#include "ndgrad/tensor.hpp"

namespace lift::nets {

using ndgrad::Shape;
using ndgrad::Tensor;

// h' = sin(omega0 * gamma * (W h + b + shift)) [+ h when residual].
// gamma only differs from 1 on a first layer.
struct SineLayer {
  Tensor weight;  // [width_out, width_in]
  Tensor bias;    // [width_out]
  double omega0 = 30.0;
  double gamma = 1.0;
  bool residual = false;

  double frequency() const { return omega0 * gamma; }
  Tensor forward(const Tensor& h, const Tensor& shift = Tensor()) const;
};

struct LinearLayer {
  Tensor weight;  // [out, in]
  Tensor bias;    // [out]

  Tensor forward(const Tensor& h) const;
};

// Applies x W^T + b over the last axis of x (any leading shape). An undefined
// bias is skipped.
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

// SIREN initialization: first layers draw W from U(-1/fan_in, 1/fan_in), other
// layers from U(-sqrt(6/fan_in)/omega0, +sqrt(6/fan_in)/omega0); biases from
// U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
std::vector<double> siren_weights(std::size_t fan_out, std::size_t fan_in, double omega0, bool first, Rng& rng);
std::vector<double> siren_biases(std::size_t fan_out, std::size_t fan_in, Rng& rng);
double siren_weight_bound(std::size_t fan_in, double omega0, bool first);

SineLayer make_sine_layer(std::size_t in, std::size_t out, double omega0, double gamma, bool residual, bool first,
                          Rng& rng);
LinearLayer make_linear_layer(std::size_t in, std::size_t out, double omega0, Rng& rng);

// Plain coordinate network (no partition). `depth` counts sine layers; the
// head is linear. gamma = 1 with residual = false is exactly SIREN.
struct InrConfig {
  std::size_t in_dim = 2;
  std::size_t out_dim = 3;
  std::size_t depth = 3;
  std::size_t width = 256;
  std::size_t first_width = 0;  // width of the first sine layer; 0 means `width`
  double omega0 = 30.0;        // first-layer base frequency
  double hidden_omega = 30.0;  // hidden-layer frequency
  double gamma = 1.0;
  bool residual = false;

  std::size_t resolved_first_width() const { return first_width ? first_width : width; }
};

class Inr {
 public:
  Inr() = default;
  Inr(InrConfig config, Rng& rng);

  const InrConfig& config() const { return config_; }
  Tensor forward(const Tensor& coords) const;  // [n, in_dim] -> [n, out_dim]
  // Output of every sine layer, in order.
  std::vector<Tensor> activations(const Tensor& coords) const;

  std::vector<Tensor> parameters() const;
  void set_parameters(const std::vector<Tensor>& values);

  std::vector<SineLayer>& layers() { return layers_; }
  const std::vector<SineLayer>& layers() const { return layers_; }
  LinearLayer& head() { return head_; }
  const LinearLayer& head() const { return head_; }

 private:
  InrConfig config_;
  std::vector<SineLayer> layers_;
  LinearLayer head_;
};

Inr build_relift(std::size_t depth, std::size_t width, double omega0, double gamma, Rng& rng, std::size_t in_dim = 2,
                 std::size_t out_dim = 3);
Inr build_siren(std::size_t depth, std::size_t width, double omega0, Rng& rng, std::size_t in_dim = 2,
                std::size_t out_dim = 3);

}  // namespace lift::nets
