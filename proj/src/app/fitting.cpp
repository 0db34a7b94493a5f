#include "app/fitting.hpp"

#include "analysis/metrics.hpp"
#include "common/error.hpp"
#include "meta/meta.hpp"
#include "ndgrad/autograd.hpp"
#include "ndgrad/ops.hpp"
#include "ndgrad/optim.hpp"
#include "partition/partition.hpp"

namespace lift::app {

using namespace ndgrad;

FitResult fit_inr(const nets::InrConfig& config, std::uint64_t seed, const Tensor& coords, const Tensor& values,
                  const FitOptions& options, const Tensor& eval_coords, const Tensor& eval_values,
                  const StepHook& hook) {
  require(coords.rank() == 2 && values.rank() == 2 && coords.dim(0) == values.dim(0), ErrorKind::Dimension,
          "fit needs coords [n, D] and values [n, C] with matching n");
  require(coords.dim(1) == config.in_dim && values.dim(1) == config.out_dim, ErrorKind::Config,
          "network dims " + std::to_string(config.in_dim) + "->" + std::to_string(config.out_dim) +
              " do not match data " + shape_str(coords.shape()) + " -> " + shape_str(values.shape()));
  Rng rng = Rng(seed).split("inr-init");
  FitResult result{nets::Inr(config, rng), {}};
  Adam adam(result.net.parameters(), AdamOptions{options.lr, 0.9, 0.999, 1e-8});
  const bool evaluate = eval_coords.defined() && eval_values.defined();
  auto eval_psnr = [&] {
    NoGradGuard off;
    return analysis::psnr(result.net.forward(eval_coords), eval_values);
  };
  for (std::size_t step = 0; step < options.steps; ++step) {
    if (hook) hook(step, result.net);
    Tensor loss = meta::rec_loss(result.net.forward(coords), values);
    FitPoint point{step, loss.item(), 0.0};
    require(std::isfinite(point.loss), ErrorKind::Numeric,
            "non-finite training loss at step " + std::to_string(step) + "; lower the learning rate");
    if (evaluate && options.eval_every && step % options.eval_every == 0) point.eval_psnr = eval_psnr();
    adam.zero_grad();
    backward(loss);
    adam.step();
    result.history.push_back(point);
  }
  if (hook) hook(options.steps, result.net);
  {
    NoGradGuard off;
    FitPoint last{options.steps, meta::rec_loss(result.net.forward(coords), values).item(), 0.0};
    if (evaluate) last.eval_psnr = eval_psnr();
    result.history.push_back(last);
  }
  return result;
}

Tensor dense_query(const nets::Inr& net, const Shape& shape, double lo, double hi) {
  NoGradGuard off;
  const Tensor coords = signals::grid_coords(shape, lo, hi);
  require(coords.dim(1) == net.config().in_dim, ErrorKind::Config, "query grid rank does not match the network");
  return signals::from_rows(net.forward(coords), shape);
}

Tensor dense_query(const meta::LiftModel& model, const hlg::LatentHierarchy& z, const Shape& shape) {
  NoGradGuard off;
  const auto gp = partition::grid_partition(shape, model.config().bank.spec);
  return model.decode(z, gp);
}

analysis::SpectralTrace track_spectral_bias(const nets::InrConfig& config, std::uint64_t seed,
                                            const signals::SignalGrid& target, const std::vector<double>& probes,
                                            std::size_t steps, double lr, std::size_t every) {
  return fit_spectral(config, seed, target, probes, steps, lr, every).trace;
}

SpectralFit fit_spectral(const nets::InrConfig& config, std::uint64_t seed, const signals::SignalGrid& target,
                         const std::vector<double>& probes, std::size_t steps, double lr, std::size_t every) {
  require(target.dims() == 1 && target.channels() == 1, ErrorKind::Config, "spectral tracking needs a 1D scalar signal");
  const Tensor coords = target.coords();
  std::vector<double> positions(coords.data().begin(), coords.data().end());
  std::vector<double> truth(target.values.data().begin(), target.values.data().end());
  const double spacing = (target.hi - target.lo) / static_cast<double>(target.points() - 1);
  for (double f : probes) {
    require(f > 0 && f < 0.5 / spacing, ErrorKind::Config,
            "probe frequency " + std::to_string(f) + " is outside (0, Nyquist)");
  }
  analysis::SpectralTrace trace;
  trace.probes = probes;
  FitOptions options{steps, lr, 0};
  auto hook = [&](std::size_t step, const nets::Inr& net) {
    if (step != steps && (every == 0 || step % every != 0)) return;
    NoGradGuard off;
    const Tensor pred = net.forward(coords);
    std::vector<double> p(pred.data().begin(), pred.data().end());
    trace.append(step, analysis::relative_spectral_errors(p, truth, positions, probes));
  };
  FitResult fit = fit_inr(config, seed, coords, target.values, options, Tensor(), Tensor(), hook);
  return {std::move(fit), std::move(trace)};
}

LiftFitResult fit_lift(const meta::LiftConfig& config, std::uint64_t seed, const signals::SignalGrid& signal,
                       const FitOptions& options) {
  Rng rng = Rng(seed).split("lift-init");
  LiftFitResult result{meta::LiftModel(config, rng), hlg::LatentHierarchy::zeros(config.hlg.latents, true), {}};
  const auto gp = partition::grid_partition(signal.shape(), config.bank.spec);
  const Tensor target = nets::split_regions(signal.values, gp);
  std::vector<Tensor> params = result.model.parameters();
  for (const auto& t : result.latents.tensors()) params.push_back(t);
  Adam adam(params, AdamOptions{options.lr, 0.9, 0.999, 1e-8});
  for (std::size_t step = 0; step < options.steps; ++step) {
    Tensor loss = meta::rec_loss(result.model.decode_regions(result.latents, gp), target);
    require(std::isfinite(loss.item()), ErrorKind::Numeric,
            "non-finite training loss at step " + std::to_string(step) + "; lower the learning rate");
    result.history.push_back({step, loss.item(), 0.0});
    adam.zero_grad();
    backward(loss);
    adam.step();
  }
  NoGradGuard off;
  const double final_loss = meta::rec_loss(result.model.decode_regions(result.latents, gp), target).item();
  result.history.push_back({options.steps, final_loss, analysis::psnr_from_mse(final_loss)});
  return result;
}

}  // namespace lift::app
