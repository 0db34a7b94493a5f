#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "signals/signal.hpp"

namespace lift::signals {

struct Degradation {
  enum class Kind { InpaintMask, Downsample, PhotonNoise };
  Kind kind = Kind::InpaintMask;
  double fraction = 0.25;  // inpainting: share of grid points withheld
  std::size_t factor = 2;  // downsampling factor per axis
  double tau = 40.0;       // mean photon count
  double readout = 2.0;    // readout photon count
  std::uint64_t seed = 0;

  static Degradation inpaint(double fraction, std::uint64_t seed);
  static Degradation downsample(std::size_t factor);
  static Degradation photon(double tau, double readout, std::uint64_t seed);
  void validate() const;
  std::string describe() const;
};

// Observed coordinate/value pairs used for fitting.
struct TrainView {
  Tensor coords;  // [n, D], same normalization as the clean grid
  Tensor values;  // [n, C]
  Shape grid;     // grid of the observations when they form one (downsampling, noise)
  std::vector<std::size_t> kept;  // clean-grid indices of the observations (inpainting, noise)
};

struct Degraded {
  TrainView train;
  SignalGrid eval_target;              // clean signal
  std::vector<std::size_t> withheld;   // inpainting: withheld grid indices, ascending
};

Degraded degrade(const SignalGrid& signal, const Degradation& d);

// Box-filter downsampling of [N..., C] by an integer factor per axis.
Tensor box_downsample(const Tensor& values, std::size_t factor);

}  // namespace lift::signals
