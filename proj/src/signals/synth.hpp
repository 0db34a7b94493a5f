#pragma once

#include <array>
#include <cstddef>

#include "common/rng.hpp"
#include "signals/signal.hpp"

namespace lift::signals {

// Round half away from zero.
double round_half_away(double x);
// f(x) = 2 R((sin 3 pi x + sin 5 pi x + sin 7 pi x + sin 9 pi x) / 2).
double spectral_function(double x);
// n uniform samples of spectral_function on [-1, 1]; shape [n, 1].
SignalGrid spectral_target(std::size_t n_samples = 300);

// Smooth background plus `blobs` Gaussian colour blobs; [size, size, 3] in [0, 1].
SignalGrid blob_image(std::size_t size, Rng& rng, std::size_t blobs = 4);

// Deterministic natural-looking RGB test image: 1/f texture over smooth
// shading with two soft-edged shapes; [size, size, 3] in [0, 1].
SignalGrid test_image(std::size_t size = 64);

// Sum of normalized coordinates scaled to [0, 1], replicated over channels.
SignalGrid ramp(const Shape& shape, std::size_t channels = 1);

// Occupancy volumes [n, n, n, 1] with values in {0, 1}. Centres and extents are
// in normalized coordinates.
SignalGrid sphere_volume(std::size_t n, std::array<double, 3> centre, double radius);
SignalGrid box_volume(std::size_t n, std::array<double, 3> lo, std::array<double, 3> hi);

}  // namespace lift::signals
