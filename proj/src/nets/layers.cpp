#include "nets/layers.hpp"

#include <cmath>

#include "common/error.hpp"
#include "ndgrad/ops.hpp"

namespace lift::nets {

using namespace ndgrad;

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  require(x.rank() >= 1 && x.shape().back() == weight.dim(1), ErrorKind::Dimension,
          "linear: input " + shape_str(x.shape()) + " does not match weight " + shape_str(weight.shape()));
  Tensor flat = x.rank() == 2 ? x : reshape(x, {x.numel() / x.shape().back(), x.shape().back()});
  Tensor y = matmul(flat, weight, false, true);
  if (bias.defined()) y = add(y, bias);
  if (x.rank() == 2) return y;
  Shape out = x.shape();
  out.back() = weight.dim(0);
  return reshape(y, out);
}

Tensor SineLayer::forward(const Tensor& h, const Tensor& shift) const {
  const std::size_t out = weight.dim(0), in = weight.dim(1);
  if (residual && out != in) {
    fail(ErrorKind::Config, "residual sine layer needs width_in == width_out, got " + std::to_string(in) + " -> " +
                                std::to_string(out));
  }
  Tensor pre = linear(h, weight, bias);
  if (shift.defined()) {
    require(shift.shape().back() == out, ErrorKind::Dimension,
            "shift " + shape_str(shift.shape()) + " does not match layer width " + std::to_string(out));
    pre = add(pre, shift);
  }
  Tensor y = sin_act(pre, frequency());
  return residual ? add(y, h) : y;
}

Tensor LinearLayer::forward(const Tensor& h) const { return linear(h, weight, bias); }

double siren_weight_bound(std::size_t fan_in, double omega0, bool first) {
  const double n = static_cast<double>(fan_in);
  return first ? 1.0 / n : std::sqrt(6.0 / n) / omega0;
}

std::vector<double> siren_weights(std::size_t fan_out, std::size_t fan_in, double omega0, bool first, Rng& rng) {
  const double bound = siren_weight_bound(fan_in, omega0, first);
  std::vector<double> w(fan_out * fan_in);
  for (auto& v : w) v = rng.uniform(-bound, bound);
  return w;
}

std::vector<double> siren_biases(std::size_t fan_out, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::vector<double> b(fan_out);
  for (auto& v : b) v = rng.uniform(-bound, bound);
  return b;
}

SineLayer make_sine_layer(std::size_t in, std::size_t out, double omega0, double gamma, bool residual, bool first,
                          Rng& rng) {
  require(omega0 > 0, ErrorKind::Config, "omega0 must be positive");
  require(gamma >= 1.0, ErrorKind::Config, "gamma must be >= 1");
  if (residual && in != out) fail(ErrorKind::Config, "residual sine layer needs equal widths");
  SineLayer layer;
  layer.weight = Tensor({out, in}, siren_weights(out, in, omega0, first, rng), true);
  layer.bias = Tensor({out}, siren_biases(out, in, rng), true);
  layer.omega0 = omega0;
  layer.gamma = first ? gamma : 1.0;
  layer.residual = residual;
  return layer;
}

LinearLayer make_linear_layer(std::size_t in, std::size_t out, double omega0, Rng& rng) {
  LinearLayer layer;
  layer.weight = Tensor({out, in}, siren_weights(out, in, omega0, false, rng), true);
  layer.bias = Tensor({out}, siren_biases(out, in, rng), true);
  return layer;
}

Inr::Inr(InrConfig config, Rng& rng) : config_(config) {
  require(config.depth >= 1, ErrorKind::Config, "depth must be >= 1");
  require(config.width >= 1 && config.in_dim >= 1 && config.out_dim >= 1, ErrorKind::Config, "empty layer widths");
  const std::size_t w0 = config.resolved_first_width();
  layers_.push_back(make_sine_layer(config.in_dim, w0, config.omega0, config.gamma, false, true, rng));
  for (std::size_t l = 1; l < config.depth; ++l) {
    const std::size_t in = l == 1 ? w0 : config.width;
    layers_.push_back(make_sine_layer(in, config.width, config.hidden_omega, 1.0, config.residual, false, rng));
  }
  head_ = make_linear_layer(config.width, config.out_dim, config.hidden_omega, rng);
}

Tensor Inr::forward(const Tensor& coords) const {
  Tensor h = coords;
  for (const auto& layer : layers_) h = layer.forward(h);
  return head_.forward(h);
}

std::vector<Tensor> Inr::activations(const Tensor& coords) const {
  std::vector<Tensor> out;
  Tensor h = coords;
  for (const auto& layer : layers_) {
    h = layer.forward(h);
    out.push_back(h);
  }
  return out;
}

std::vector<Tensor> Inr::parameters() const {
  std::vector<Tensor> params;
  for (const auto& layer : layers_) {
    params.push_back(layer.weight);
    params.push_back(layer.bias);
  }
  params.push_back(head_.weight);
  params.push_back(head_.bias);
  return params;
}

void Inr::set_parameters(const std::vector<Tensor>& values) {
  require(values.size() == 2 * layers_.size() + 2, ErrorKind::Consistency, "parameter count mismatch");
  auto assign = [](Tensor& dst, const Tensor& src) {
    require(dst.shape() == src.shape(), ErrorKind::Consistency,
            "parameter shape mismatch: " + shape_str(dst.shape()) + " vs " + shape_str(src.shape()));
    dst = Tensor(src.shape(), std::vector<double>(src.data().begin(), src.data().end()), true);
  };
  std::size_t i = 0;
  for (auto& layer : layers_) {
    assign(layer.weight, values[i++]);
    assign(layer.bias, values[i++]);
  }
  assign(head_.weight, values[i++]);
  assign(head_.bias, values[i++]);
}

Inr build_relift(std::size_t depth, std::size_t width, double omega0, double gamma, Rng& rng, std::size_t in_dim,
                 std::size_t out_dim) {
  require(depth >= 2, ErrorKind::Config, "ReLIFT needs depth >= 2");
  InrConfig config{in_dim, out_dim, depth, width, 0, omega0, omega0, gamma, true};
  return Inr(config, rng);
}

Inr build_siren(std::size_t depth, std::size_t width, double omega0, Rng& rng, std::size_t in_dim,
                std::size_t out_dim) {
  InrConfig config{in_dim, out_dim, depth, width, 0, omega0, omega0, 1.0, false};
  return Inr(config, rng);
}

}  // namespace lift::nets
