#include "signals/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.hpp"

namespace lift::signals {

using std::numbers::pi;

double round_half_away(double x) { return std::round(x); }

double spectral_function(double x) {
  const double s = std::sin(3 * pi * x) + std::sin(5 * pi * x) + std::sin(7 * pi * x) + std::sin(9 * pi * x);
  return 2.0 * round_half_away(s / 2.0);
}

SignalGrid spectral_target(std::size_t n_samples) {
  require(n_samples >= 2, ErrorKind::Config, "spectral target needs at least 2 samples");
  std::vector<double> v(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) v[i] = spectral_function(axis_coordinate(i, n_samples, -1.0, 1.0));
  return SignalGrid::make(Tensor({n_samples, 1}, std::move(v)), "spectral_target", -1.0, 1.0);
}

SignalGrid blob_image(std::size_t size, Rng& rng, std::size_t blobs) {
  require(size >= 1, ErrorKind::Config, "image size must be >= 1");
  std::array<double, 3> base{}, slope_x{}, slope_y{};
  for (std::size_t c = 0; c < 3; ++c) {
    base[c] = rng.uniform(0.15, 0.45);
    slope_x[c] = rng.uniform(-0.15, 0.15);
    slope_y[c] = rng.uniform(-0.15, 0.15);
  }
  struct Blob {
    double cx, cy, sigma;
    std::array<double, 3> colour;
  };
  std::vector<Blob> list;
  for (std::size_t b = 0; b < blobs; ++b) {
    Blob blob{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.08, 0.22), {}};
    for (auto& c : blob.colour) c = rng.uniform(-0.4, 0.6);
    list.push_back(blob);
  }
  std::vector<double> v(size * size * 3);
  for (std::size_t i = 0; i < size; ++i) {
    const double y = axis_coordinate(i, size);
    for (std::size_t j = 0; j < size; ++j) {
      const double x = axis_coordinate(j, size);
      for (std::size_t c = 0; c < 3; ++c) {
        double value = base[c] + slope_x[c] * (x - 0.5) + slope_y[c] * (y - 0.5);
        for (const auto& blob : list) {
          const double r2 = (x - blob.cx) * (x - blob.cx) + (y - blob.cy) * (y - blob.cy);
          value += blob.colour[c] * std::exp(-r2 / (2 * blob.sigma * blob.sigma));
        }
        v[(i * size + j) * 3 + c] = std::clamp(value, 0.0, 1.0);
      }
    }
  }
  return SignalGrid::make(Tensor({size, size, 3}, std::move(v)), "blob_image");
}

SignalGrid test_image(std::size_t size) {
  require(size >= 2, ErrorKind::Config, "image size must be >= 2");
  // 1/f texture (natural-image amplitude spectrum) from a fixed seed, plus a
  // few soft-edged shapes.
  Rng rng(0x5eed1e55);
  struct Wave {
    double fx, fy, phase, amp;
    std::array<double, 3> tint;
  };
  std::vector<Wave> waves;
  constexpr int kMaxFreq = 24;
  for (int kx = -kMaxFreq; kx <= kMaxFreq; ++kx) {
    for (int ky = 0; ky <= kMaxFreq; ++ky) {
      if (ky == 0 && kx <= 0) continue;
      const double k = std::hypot(kx, ky);
      if (k > kMaxFreq) continue;
      Wave w{static_cast<double>(kx), static_cast<double>(ky), rng.uniform(0, 2 * pi), 1.0 / k, {}};
      for (auto& t : w.tint) t = 1.0 + rng.uniform(-0.3, 0.3);
      waves.push_back(w);
    }
  }
  auto smoothstep = [](double edge, double width, double d) {
    const double t = std::clamp((edge - d) / width + 0.5, 0.0, 1.0);
    return t * t * (3 - 2 * t);
  };
  std::vector<double> v(size * size * 3);
  for (std::size_t i = 0; i < size; ++i) {
    const double y = axis_coordinate(i, size);
    for (std::size_t j = 0; j < size; ++j) {
      const double x = axis_coordinate(j, size);
      std::array<double, 3> tex{};
      for (const auto& w : waves) {
        const double s = w.amp * std::sin(2 * pi * (w.fx * x + w.fy * y) + w.phase);
        for (int c = 0; c < 3; ++c) tex[c] += w.tint[c] * s;
      }
      std::array<double, 3> px{0.45 + 0.2 * y + 0.09 * tex[0], 0.5 + 0.09 * tex[1], 0.55 - 0.2 * y + 0.09 * tex[2]};
      const double disc = smoothstep(0.18, 0.03, std::hypot(x - 0.32, y - 0.35));
      const double u = (x - 0.68) * 0.8 + (y - 0.62) * 0.6, w = -(x - 0.68) * 0.6 + (y - 0.62) * 0.8;
      const double square = smoothstep(0.16, 0.03, std::max(std::fabs(u), std::fabs(w)));
      const std::array<double, 3> disc_colour{0.9, 0.7, 0.2}, square_colour{0.15, 0.45, 0.3};
      for (int c = 0; c < 3; ++c) {
        double value = px[c] * (1 - disc) + (disc_colour[c] + 0.05 * tex[c]) * disc;
        value = value * (1 - square) + (square_colour[c] + 0.05 * tex[(c + 1) % 3]) * square;
        v[(i * size + j) * 3 + c] = std::clamp(value, 0.0, 1.0);
      }
    }
  }
  return SignalGrid::make(Tensor({size, size, 3}, std::move(v)), "test_image");
}

SignalGrid ramp(const Shape& shape, std::size_t channels) {
  require(!shape.empty() && shape.size() <= 3 && channels >= 1, ErrorKind::Config, "ramp needs 1..3 axes");
  const Tensor coords = grid_coords(shape);
  const std::size_t n = coords.dim(0), D = shape.size();
  std::vector<double> v(n * channels);
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0;
    for (std::size_t d = 0; d < D; ++d) s += coords.data()[p * D + d];
    for (std::size_t c = 0; c < channels; ++c) v[p * channels + c] = s / static_cast<double>(D);
  }
  Shape full = shape;
  full.push_back(channels);
  return SignalGrid::make(Tensor(full, std::move(v)), "ramp");
}

namespace {

template <typename Inside>
SignalGrid volume(std::size_t n, const char* name, Inside inside) {
  require(n >= 2, ErrorKind::Config, "volume extent must be >= 2");
  std::vector<double> v(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const std::array<double, 3> p{axis_coordinate(i, n), axis_coordinate(j, n), axis_coordinate(k, n)};
        v[(i * n + j) * n + k] = inside(p) ? 1.0 : 0.0;
      }
    }
  }
  return SignalGrid::make(Tensor({n, n, n, 1}, std::move(v)), name);
}

}  // namespace

SignalGrid sphere_volume(std::size_t n, std::array<double, 3> centre, double radius) {
  return volume(n, "sphere_volume", [&](const std::array<double, 3>& p) {
    double r2 = 0;
    for (int d = 0; d < 3; ++d) r2 += (p[d] - centre[d]) * (p[d] - centre[d]);
    return r2 <= radius * radius;
  });
}

SignalGrid box_volume(std::size_t n, std::array<double, 3> lo, std::array<double, 3> hi) {
  return volume(n, "box_volume", [&](const std::array<double, 3>& p) {
    for (int d = 0; d < 3; ++d) {
      if (p[d] < lo[d] || p[d] > hi[d]) return false;
    }
    return true;
  });
}

}  // namespace lift::signals
