#include "analysis/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "analysis/bessel.hpp"
#include "common/error.hpp"
#include "signals/signal.hpp"

namespace lift::analysis {

double HarmonicExpansion::evaluate(double r) const {
  double s = offset;
  for (std::size_t i = 0; i < freqs.size(); ++i) s += coeffs[i] * std::sin(freqs[i] * r);
  return s;
}

namespace {

void check_architecture(const nets::Inr& net) {
  const auto& c = net.config();
  if (c.in_dim != 1 || c.out_dim != 1 || c.depth != 2) {
    fail(ErrorKind::Unsupported, "expansion needs a scalar net with exactly two sine layers, got in=" +
                                     std::to_string(c.in_dim) + " out=" + std::to_string(c.out_dim) +
                                     " depth=" + std::to_string(c.depth));
  }
  for (const auto& layer : net.layers()) {
    for (double b : layer.bias.data()) {
      if (b != 0.0) fail(ErrorKind::Unsupported, "expansion needs zero sine-layer biases");
    }
  }
}

}  // namespace

HarmonicExpansion bessel_expand(const nets::Inr& net, int s_max) {
  check_architecture(net);
  require(s_max >= 0 && s_max <= 64, ErrorKind::Config, "s_max must lie in [0, 64]");
  const auto& first = net.layers()[0];
  const auto& hidden = net.layers()[1];
  const std::size_t T = first.weight.dim(0), F = hidden.weight.dim(0);
  const std::size_t terms_per_unit = static_cast<std::size_t>(std::pow(2 * s_max + 1, static_cast<double>(T)));
  require(terms_per_unit <= 2000000, ErrorKind::Unsupported, "enumeration too large; reduce T or s_max");
  const double scale = first.frequency();  // gamma * omega0
  const double hidden_omega = hidden.frequency();
  std::vector<double> omega(T);
  for (std::size_t t = 0; t < T; ++t) omega[t] = scale * first.weight.data()[t];
  const auto w1 = hidden.weight.data();
  const auto w2 = net.head().weight.data();

  std::map<double, double> acc;
  auto add_term = [&acc](double freq, double coeff) {
    if (freq == 0.0 || coeff == 0.0) return;
    if (freq < 0) {
      freq = -freq;
      coeff = -coeff;
    }
    acc[freq] += coeff;
  };
  HarmonicExpansion out;
  out.s_max = s_max;
  out.offset = net.head().bias.data()[0];
  std::vector<int> s(T);
  for (std::size_t m = 0; m < F; ++m) {
    std::vector<std::vector<double>> j(T, std::vector<double>(2 * s_max + 1));
    double inside = 1.0, with_tail = 1.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double beta = hidden_omega * w1[m * T + t];
      double mass = 0;
      for (int k = -s_max; k <= s_max; ++k) {
        j[t][k + s_max] = bessel_j(k, beta);
        mass += std::fabs(j[t][k + s_max]);
      }
      inside *= mass;
      with_tail *= mass + bessel_tail_bound(s_max, beta);
    }
    out.tail_bound += std::fabs(w2[m]) * (with_tail - inside);
    std::fill(s.begin(), s.end(), -s_max);
    for (std::size_t e = 0; e < terms_per_unit; ++e) {
      double coeff = w2[m], freq = 0;
      for (std::size_t t = 0; t < T; ++t) {
        coeff *= j[t][s[t] + s_max];
        freq += s[t] * omega[t];
      }
      add_term(freq, coeff);
      for (std::size_t t = T; t-- > 0;) {
        if (++s[t] <= s_max) break;
        s[t] = -s_max;
      }
    }
    if (hidden.residual) add_term(omega[m], w2[m]);
  }
  for (const auto& [f, c] : acc) {
    out.freqs.push_back(f);
    out.coeffs.push_back(c);
  }
  return out;
}

double expansion_vs_direct(const nets::Inr& net, const HarmonicExpansion& expansion, const std::vector<double>& grid) {
  ndgrad::NoGradGuard off;
  const ndgrad::Tensor r({grid.size(), 1}, grid);
  const ndgrad::Tensor direct = net.forward(r);
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::fabs(direct.data()[i] - expansion.evaluate(grid[i])));
  }
  return worst;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = signals::axis_coordinate(i, n, lo, hi);
  return g;
}

nets::Inr toy_network(std::size_t first, std::size_t hidden, double gamma, bool residual, Rng& rng, double omega0,
                      double hidden_omega) {
  nets::InrConfig config;
  config.in_dim = 1;
  config.out_dim = 1;
  config.depth = 2;
  config.width = hidden;
  config.first_width = first;
  config.omega0 = omega0;
  config.hidden_omega = hidden_omega;
  config.gamma = gamma;
  config.residual = residual;
  nets::Inr net(config, rng);
  using ndgrad::Tensor;
  std::vector<Tensor> params = net.parameters();
  for (auto& p : params) {
    std::vector<double> v(p.numel());
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    p = Tensor(p.shape(), std::move(v));
  }
  net.set_parameters(params);
  for (auto& layer : net.layers()) layer.bias = Tensor::zeros(layer.bias.shape(), true);
  return net;
}

}  // namespace lift::analysis
