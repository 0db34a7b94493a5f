#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "../support/gradcheck.hpp"
#include "analysis/bessel.hpp"
#include "analysis/expansion.hpp"
#include "analysis/metrics.hpp"
#include "analysis/spectrum.hpp"
#include "common/error.hpp"
#include "meta/meta.hpp"
#include "signals/synth.hpp"

using namespace lift;
using namespace lift::analysis;
using lift::testing::random_tensor;

namespace {

const double kPi = std::acos(-1.0);

// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt, composite Simpson.
double bessel_integral(int n, double x) {
  const int m = 4000;
  const double h = kPi / m;
  double s = 0;
  for (int i = 0; i <= m; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
    s += w * std::cos(n * t - x * std::sin(t));
  }
  return s * h / 3 / kPi;
}

// Two sine layers of width one: sin(hidden * w1 * sin(gamma * omega0 * w0 r)).
nets::Inr scalar_toy(double w0, double w1, double head, double gamma, bool residual) {
  Rng rng(0);
  nets::Inr net = toy_network(1, 1, gamma, residual, rng);
  net.layers()[0].weight = Tensor({1, 1}, {w0});
  net.layers()[1].weight = Tensor({1, 1}, {w1});
  net.head().weight = Tensor({1, 1}, {head});
  net.head().bias = Tensor({1}, {0.0});
  return net;
}

double coefficient_at(const HarmonicExpansion& e, double freq) {
  for (std::size_t i = 0; i < e.freqs.size(); ++i)
    if (std::abs(e.freqs[i] - freq) < 1e-9) return e.coeffs[i];
  return 0.0;
}

std::vector<double> dft_reference(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0, im = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 2 * kPi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      re += x[j] * std::cos(a);
      im -= x[j] * std::sin(a);
    }
    out[k] = std::hypot(re, im);
  }
  return out;
}

}  // namespace

TEST(Bessel, SpecialValuesAndTable) {
  EXPECT_EQ(bessel_j(0, 0.0), 1.0);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(bessel_j(n, 0.0), 0.0);
  EXPECT_NEAR(bessel_j(0, 1.0), 0.7651976865579666, 1e-14);
  EXPECT_NEAR(bessel_j(1, 1.0), 0.44005058574493355, 1e-14);
  EXPECT_NEAR(bessel_j(0, 5.0), -0.17759677131433830, 1e-13);
  EXPECT_NEAR(bessel_j(5, 10.0), -0.23406152818679365, 1e-13);
  EXPECT_NEAR(2 * bessel_j(1, 0.5), 0.4845369153497478, 1e-15);
  EXPECT_NEAR(2 * bessel_j(3, 0.5), 0.005127459989174489, 1e-16);
}

TEST(Bessel, MatchesIntegralRepresentation) {
  for (int n = -6; n <= 12; ++n) {
    for (double x : {-3.0, -0.4, 0.3, 1.0, 2.5, 4.0, 4.5, 7.0, 12.0, 20.0}) {
      EXPECT_NEAR(bessel_j(n, x), bessel_integral(n, x), 1e-11) << n << " " << x;
    }
  }
}

TEST(Bessel, RecurrenceHolds) {
  for (int i = 0; i <= 49; ++i) {
    const double x = 0.1 + 4.9 * i / 49.0;
    for (int n = 1; n <= 10; ++n) {
      EXPECT_NEAR(bessel_j(n + 1, x), 2 * n / x * bessel_j(n, x) - bessel_j(n - 1, x), 1e-10) << n << " " << x;
    }
  }
}

TEST(Bessel, TailBoundDominatesTail) {
  for (double x : {0.3, 1.0, 2.0}) {
    for (int s = 2; s <= 8; ++s) {
      double tail = 0;
      for (int n = s + 1; n <= 60; ++n) tail += 2 * std::abs(bessel_j(n, x));
      EXPECT_GE(bessel_tail_bound(s, x), tail);
    }
  }
}

TEST(Expansion, ZeroHiddenWeightsGiveZeroFunction) {
  const nets::Inr net = scalar_toy(1.0, 0.0, 1.0, 1.0, false);
  const auto e = bessel_expand(net);
  for (double r : uniform_grid(-1, 1, 50)) EXPECT_EQ(e.evaluate(r), 0.0);
  EXPECT_EQ(expansion_vs_direct(net, e, uniform_grid(-1, 1, 50)), 0.0);
}

TEST(Expansion, JacobiAngerCoefficients) {
  const nets::Inr net = scalar_toy(1.0, 0.5, 1.0, 1.0, false);
  const auto e = bessel_expand(net, 10);
  // omega_t = omega0 * W0 = 5.
  EXPECT_NEAR(coefficient_at(e, 5.0), 0.4845369153497478, 1e-14);
  EXPECT_NEAR(coefficient_at(e, 15.0), 0.005127459989174489, 1e-15);
  EXPECT_EQ(coefficient_at(e, 10.0), 0.0);
  EXPECT_LT(expansion_vs_direct(net, e, uniform_grid(-1, 1, 400)), 1e-12);
}

TEST(Expansion, ResidualAddsFundamentals) {
  Rng rng(1);
  nets::Inr net = toy_network(3, 3, 2.0, true, rng);
  net.layers()[1].weight = Tensor::zeros({3, 3});
  const auto e = bessel_expand(net);
  for (double r : uniform_grid(-1, 1, 40)) {
    double ref = net.head().bias.data()[0];
    for (std::size_t m = 0; m < 3; ++m)
      ref += net.head().weight.data()[m] * std::sin(2.0 * 5.0 * net.layers()[0].weight.data()[m] * r);
    EXPECT_NEAR(e.evaluate(r), ref, 1e-13);
  }
  nets::Inr plain = net;
  plain.layers()[1].residual = false;
  const auto p = bessel_expand(plain);
  for (std::size_t m = 0; m < 3; ++m) {
    const double f = std::abs(2.0 * 5.0 * net.layers()[0].weight.data()[m]);
    EXPECT_GE(std::abs(coefficient_at(e, f)), std::abs(coefficient_at(p, f)));
  }
}

TEST(Expansion, ScalarHiddenDeviationBelowMicro) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const nets::Inr net = toy_network(1, 4, 1.0 + static_cast<double>(seed % 2), false, rng);
    const auto e = bessel_expand(net, 10);
    EXPECT_LT(expansion_vs_direct(net, e, uniform_grid(-1, 1, 500)), 1e-6);
  }
}

TEST(Expansion, DeviationShrinksWithTruncation) {
  Rng rng(2);
  const nets::Inr net = toy_network(2, 3, 1.0, false, rng, 5.0, 2.0);
  const auto grid = uniform_grid(-1, 1, 200);
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= 7; ++s) {
    const auto e = bessel_expand(net, s);
    const double dev = expansion_vs_direct(net, e, grid);
    EXPECT_LT(dev, prev) << s;
    EXPECT_LE(dev, e.tail_bound + 1e-12) << s;
    prev = dev;
  }
}

TEST(Expansion, RejectsOtherArchitectures) {
  Rng rng(3);
  try {
    bessel_expand(nets::build_siren(3, 4, 5.0, rng, 1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
  EXPECT_THROW(bessel_expand(nets::build_siren(2, 4, 5.0, rng, 2, 1)), Error);
  nets::Inr biased = toy_network(2, 2, 1.0, false, rng);
  biased.layers()[0].bias = Tensor({2}, {0.1, 0.0});
  EXPECT_THROW(bessel_expand(biased), Error);
}

TEST(Spectrum, PureToneHasOneBin) {
  const std::size_t n = 300;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2 * kPi * 3 * static_cast<double>(i) / n);
  EXPECT_EQ(support_bins(x, 1e-6), std::vector<std::size_t>{3});
  EXPECT_LT(parseval_gap(x), 1e-9);
}

TEST(Spectrum, MatchesReferenceLoopAndParseval) {
  Rng rng(4);
  std::vector<double> x(97);
  for (auto& v : x) v = rng.uniform(-1, 1);
  const auto s = dft_spectrum(x), r = dft_reference(x);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(s[k], r[k], 1e-10);
  EXPECT_LT(parseval_gap(x), 1e-9);
  const auto t = signals::spectral_target();
  std::vector<double> tv(t.values.data().begin(), t.values.data().end());
  const auto ts = dft_spectrum(tv), tr = dft_reference(tv);
  for (std::size_t k = 0; k < tv.size(); ++k) EXPECT_NEAR(ts[k], tr[k], 1e-9);
  EXPECT_LT(parseval_gap(tv), 1e-9);
}

TEST(Spectrum, SpectralTargetHasEnergyAtProbes) {
  const auto t = signals::spectral_target();
  std::vector<double> v(t.values.data().begin(), t.values.data().end());
  const Tensor c = t.coords();
  std::vector<double> pos(c.data().begin(), c.data().end());
  double total = 0;
  for (double x : v) total += std::abs(x);
  for (double f : {1.5, 2.5, 3.5, 4.5}) {
    const auto X = dft_at(v, pos, f);
    std::complex<double> ref = 0;
    for (std::size_t i = 0; i < v.size(); ++i) ref += v[i] * std::polar(1.0, -2 * kPi * f * pos[i]);
    EXPECT_NEAR(std::abs(X - ref), 0.0, 1e-9);
    EXPECT_GT(std::abs(X), 0.05 * total) << f;
  }
}

TEST(Spectrum, RelativeErrorsAndTrace) {
  const auto t = signals::spectral_target(100);
  std::vector<double> v(t.values.data().begin(), t.values.data().end());
  const Tensor c = t.coords();
  std::vector<double> pos(c.data().begin(), c.data().end());
  const std::vector<double> probes{1.5, 4.5};
  for (double e : relative_spectral_errors(v, v, pos, probes)) EXPECT_EQ(e, 0.0);
  for (double e : relative_spectral_errors(std::vector<double>(100, 0.0), v, pos, probes)) EXPECT_NEAR(e, 1.0, 1e-12);
  const auto z = relative_spectral_errors(v, std::vector<double>(100, 0.0), pos, probes);
  EXPECT_TRUE(std::isnan(z[0]));
  SpectralTrace trace;
  trace.probes = probes;
  trace.append(0, {1.0, 1.0});
  trace.append(50, {0.2, 0.9});
  EXPECT_THROW(trace.append(50, {0.1, 0.1}), Error);
  EXPECT_THROW(trace.append(60, {0.1}), Error);
  std::ostringstream out;
  trace.write_csv(out);
  EXPECT_NE(out.str().find("50"), std::string::npos);
}

TEST(Metrics, PsnrExamplesAndOracle) {
  const Tensor zero = Tensor::zeros({10, 10, 1});
  EXPECT_NEAR(psnr(Tensor::full({10, 10, 1}, std::sqrt(1e-3)), zero), 30.0, 1e-12);
  EXPECT_NEAR(psnr(Tensor::full({10, 10, 1}, 0.1), zero), 20.0, 1e-12);
  EXPECT_NEAR(psnr_from_mse(1e-3), 30.0, 1e-12);
  EXPECT_TRUE(std::isinf(psnr(zero, zero)));
  Rng rng(5);
  const Tensor a = random_tensor({6, 5, 3}, rng, 0, 1), b = random_tensor({6, 5, 3}, rng, 0, 1);
  double s = 0;
  for (std::size_t i = 0; i < a.numel(); ++i) s += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
  EXPECT_NEAR(mse(a, b), s / 90, 1e-15);
  EXPECT_NEAR(psnr(a, b), -10 * std::log10(s / 90), 1e-12);
  EXPECT_NEAR(psnr(a, b), -10 * std::log10(meta::rec_loss(a, b).item()), 1e-12);
  EXPECT_NEAR(psnr(a, b, 2.0), psnr(a, b) + 20 * std::log10(2.0), 1e-12);
  EXPECT_THROW(psnr(a, random_tensor({5, 6, 3}, rng)), Error);
}

TEST(Metrics, IouExamples) {
  auto box = [](std::size_t x0, std::size_t x1) {
    std::vector<double> v(4 * 4 * 4, 0.0);
    for (std::size_t x = x0; x < x1; ++x)
      for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t z = 0; z < 4; ++z) v[(x * 4 + y) * 4 + z] = 1.0;
    return Tensor({4, 4, 4, 1}, v);
  };
  EXPECT_EQ(iou(box(0, 2), box(0, 2)), 1.0);
  EXPECT_EQ(iou(box(0, 2), box(2, 4)), 0.0);
  // 32 and 32 voxels sharing 16.
  EXPECT_DOUBLE_EQ(iou(box(0, 2), box(1, 3)), 16.0 / 48.0);
  EXPECT_EQ(iou(box(0, 0), box(0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(iou(Tensor::full({2, 1}, 0.49), Tensor::full({2, 1}, 0.5)), 0.0);
}

TEST(Metrics, SsimMatchesTwoPassOracle) {
  Rng rng(6);
  const Tensor a = random_tensor({9, 10, 2}, rng, 0, 1);
  Tensor b = random_tensor({9, 10, 2}, rng, 0, 1);
  EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
  double total = 0;
  int count = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i + 8 <= 9; ++i) {
      for (std::size_t j = 0; j + 8 <= 10; ++j) {
        auto at = [&](const Tensor& t, std::size_t u, std::size_t v) { return t.data()[((i + u) * 10 + j + v) * 2 + c]; };
        double ma = 0, mb = 0;
        for (std::size_t u = 0; u < 8; ++u)
          for (std::size_t v = 0; v < 8; ++v) ma += at(a, u, v) / 64, mb += at(b, u, v) / 64;
        double va = 0, vb = 0, cv = 0;
        for (std::size_t u = 0; u < 8; ++u) {
          for (std::size_t v = 0; v < 8; ++v) {
            va += std::pow(at(a, u, v) - ma, 2) / 64;
            vb += std::pow(at(b, u, v) - mb, 2) / 64;
            cv += (at(a, u, v) - ma) * (at(b, u, v) - mb) / 64;
          }
        }
        const double c1 = 1e-4, c2 = 9e-4;
        total += (2 * ma * mb + c1) * (2 * cv + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        ++count;
      }
    }
  }
  EXPECT_NEAR(ssim(a, b), total / count, 1e-12);
  EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-15);
  EXPECT_THROW(ssim(Tensor::zeros({4, 4, 1}), Tensor::zeros({4, 4, 1})), Error);
}
