#pragma once

#include <cstddef>
#include <vector>

#include "nets/layers.hpp"

namespace lift::analysis {

// f(r) = offset + sum_i coeffs[i] * sin(freqs[i] * r), freqs strictly increasing
// and positive.
struct HarmonicExpansion {
  std::vector<double> freqs;
  std::vector<double> coeffs;
  double offset = 0.0;
  int s_max = 0;
  double tail_bound = 0.0;  // bound on |f - truncated f| over all r

  double evaluate(double r) const;
};

// Expands a scalar-input, scalar-output network with two sine layers and zero
// sine-layer biases:
//   z0_t = sin(gamma * omega0 * W0_t r),  z1_m = sin(hidden_omega * sum_t W1_mt z0_t) [+ z0_m],
//   f = sum_m w2_m z1_m + b2.
// Every z1_m becomes sum over s in [-s_max, s_max]^T of prod_t J_{s_t}(hidden_omega W1_mt)
// sin(gamma sum_t s_t omega_t r), with omega_t = omega0 W0_t.
HarmonicExpansion bessel_expand(const nets::Inr& net, int s_max = 8);

// max_r |net(r) - expansion(r)| over the given sample positions.
double expansion_vs_direct(const nets::Inr& net, const HarmonicExpansion& expansion, const std::vector<double>& grid);

std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

// Random net in the expandable family: `first` first-layer units, `hidden`
// second-layer units, all weights and the head bias U(-1, 1), zero sine biases.
// A residual net needs first == hidden.
nets::Inr toy_network(std::size_t first, std::size_t hidden, double gamma, bool residual, Rng& rng,
                      double omega0 = 5.0, double hidden_omega = 1.0);

}  // namespace lift::analysis
