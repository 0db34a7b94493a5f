#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "analysis/spectrum.hpp"
#include "meta/lift_model.hpp"
#include "nets/layers.hpp"
#include "signals/signal.hpp"

namespace lift::app {

using ndgrad::Shape;
using ndgrad::Tensor;

struct FitOptions {
  std::size_t steps = 500;  // full-batch Adam steps ("epochs")
  double lr = 1e-4;
  std::size_t eval_every = 0;  // 0 disables periodic evaluation
};

struct FitPoint {
  std::size_t step = 0;
  double loss = 0.0;       // training MSE before the update
  double eval_psnr = 0.0;  // against the evaluation target when one is given
};

// Full-batch Adam fit of a plain INR to coordinate/value rows. When
// `eval_coords`/`eval_values` are given, PSNR on them is recorded every
// eval_every steps and after the last step.
struct FitResult {
  nets::Inr net;
  std::vector<FitPoint> history;
};

using StepHook = std::function<void(std::size_t step, const nets::Inr& net)>;

FitResult fit_inr(const nets::InrConfig& config, std::uint64_t seed, const Tensor& coords, const Tensor& values,
                  const FitOptions& options, const Tensor& eval_coords = Tensor(),
                  const Tensor& eval_values = Tensor(), const StepHook& hook = {});

// Evaluates an INR on a uniform grid of `shape` (same coordinate normalization
// as training); returns [shape..., C].
Tensor dense_query(const nets::Inr& net, const Shape& shape, double lo = 0.0, double hi = 1.0);
// LIFT decode on a grid of `shape` (every extent divisible by M).
Tensor dense_query(const meta::LiftModel& model, const hlg::LatentHierarchy& z, const Shape& shape);

// Trains an INR on the 1D target and records per-probe relative DFT errors at
// step 0 and every `every` steps through `steps`.
analysis::SpectralTrace track_spectral_bias(const nets::InrConfig& config, std::uint64_t seed,
                                            const signals::SignalGrid& target, const std::vector<double>& probes,
                                            std::size_t steps, double lr, std::size_t every);
// Same run, keeping the trained network and loss history.
struct SpectralFit {
  FitResult fit;
  analysis::SpectralTrace trace;
};
SpectralFit fit_spectral(const nets::InrConfig& config, std::uint64_t seed, const signals::SignalGrid& target,
                         const std::vector<double>& probes, std::size_t steps, double lr, std::size_t every);

// Single-signal LIFT fit: bank, generator and latents trained jointly by Adam.
struct LiftFitResult {
  meta::LiftModel model;
  hlg::LatentHierarchy latents;
  std::vector<FitPoint> history;
};
LiftFitResult fit_lift(const meta::LiftConfig& config, std::uint64_t seed, const signals::SignalGrid& signal,
                       const FitOptions& options);

}  // namespace lift::app
