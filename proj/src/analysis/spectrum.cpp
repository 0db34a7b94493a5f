#include "analysis/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "common/error.hpp"
#include "common/log.hpp"

namespace lift::analysis {

using std::numbers::pi;

std::complex<double> dft_at(const std::vector<double>& samples, const std::vector<double>& positions, double freq) {
  require(samples.size() == positions.size(), ErrorKind::Dimension, "dft_at: samples and positions differ in length");
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double phase = -2 * pi * freq * positions[i];
    acc += samples[i] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

namespace {

std::vector<std::complex<double>> full_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      // Reduce k*i mod n first so the phase stays accurate for long signals.
      const double phase = -2 * pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> dft_spectrum(const std::vector<double>& x) {
  const auto X = full_dft(x);
  std::vector<double> mag(X.size());
  for (std::size_t k = 0; k < X.size(); ++k) mag[k] = std::abs(X[k]);
  return mag;
}

double parseval_gap(const std::vector<double>& x) {
  const auto X = full_dft(x);
  double time = 0, freq = 0;
  for (double v : x) time += v * v;
  for (const auto& v : X) freq += std::norm(v);
  return std::fabs(time - freq / static_cast<double>(x.size()));
}

std::vector<std::size_t> support_bins(const std::vector<double>& x, double rel_threshold) {
  const auto mag = dft_spectrum(x);
  const std::size_t half = x.size() / 2;
  double peak = 0;
  for (std::size_t k = 0; k <= half; ++k) peak = std::max(peak, mag[k]);
  std::vector<std::size_t> bins;
  if (peak == 0) return bins;
  for (std::size_t k = 0; k <= half; ++k) {
    if (mag[k] > rel_threshold * peak) bins.push_back(k);
  }
  return bins;
}

std::vector<double> relative_spectral_errors(const std::vector<double>& pred, const std::vector<double>& target,
                                             const std::vector<double>& positions, const std::vector<double>& probes) {
  require(pred.size() == target.size(), ErrorKind::Dimension, "prediction and target differ in length");
  double energy = 0;
  for (double v : target) energy += std::fabs(v);
  std::vector<double> out;
  for (double f : probes) {
    const auto t = dft_at(target, positions, f);
    if (std::abs(t) <= 1e-9 * std::max(energy, 1e-300)) {
      log::warn("spectrum: target has no energy at probe " + std::to_string(f) + "; excluded");
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    out.push_back(std::abs(dft_at(pred, positions, f) - t) / std::abs(t));
  }
  return out;
}

void SpectralTrace::append(std::size_t step, std::vector<double> row) {
  require(steps.empty() || step > steps.back(), ErrorKind::Consistency, "trace steps must increase");
  require(row.size() == probes.size(), ErrorKind::Dimension, "trace row length differs from probe count");
  steps.push_back(step);
  errors.push_back(std::move(row));
}

void SpectralTrace::write_csv(std::ostream& out) const {
  out << "step";
  for (double f : probes) out << ",err_" << std::setprecision(6) << f;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    out << steps[i];
    for (double e : errors[i]) out << ',' << e;
    out << '\n';
  }
}

}  // namespace lift::analysis
