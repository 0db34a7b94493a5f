#include "meta/meta.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "common/binio.hpp"
#include "common/error.hpp"
#include "common/log.hpp"
#include "ndgrad/autograd.hpp"
#include "ndgrad/ops.hpp"

namespace lift::meta {

using namespace ndgrad;

void MetaConfig::validate() const {
  require(k_neighbors >= 1, ErrorKind::Config, "K must be >= 1");
  require(lambda >= 0, ErrorKind::Config, "lambda must be >= 0");
  require(inner_lr >= 0, ErrorKind::Config, "inner_lr must be >= 0");
  require(outer_lr > 0, ErrorKind::Config, "outer_lr must be > 0");
  require(batch_size >= 1, ErrorKind::Config, "batch_size must be >= 1");
  if (lambda > 0) {
    require(batch_size > k_neighbors, ErrorKind::Config,
            "smoothness needs batch_size > K (batch_size=" + std::to_string(batch_size) +
                ", K=" + std::to_string(k_neighbors) + ")");
  }
}

Tensor rec_loss(const Tensor& pred, const Tensor& target) {
  require(pred.shape() == target.shape(), ErrorKind::Dimension,
          "rec_loss shape mismatch: " + shape_str(pred.shape()) + " vs " + shape_str(target.shape()));
  return mean(square(sub(pred, target)));
}

Tensor smoothness_loss(const std::vector<Tensor>& alphas, std::size_t k) {
  const std::size_t n = alphas.size();
  require(k >= 1, ErrorKind::Config, "K must be >= 1");
  require(n > k, ErrorKind::Config,
          "smoothness loss needs more than K=" + std::to_string(k) + " latents, got " + std::to_string(n));
  for (const auto& a : alphas) {
    require(a.shape() == alphas[0].shape(), ErrorKind::Dimension, "latents in a batch must share a shape");
  }
  std::vector<std::vector<Tensor>> dist(n, std::vector<Tensor>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = sum(square(sub(alphas[i], alphas[j])));
  }
  Tensor total;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    std::stable_sort(others.begin(), others.end(),
                     [&](std::size_t a, std::size_t b) { return dist[i][a].item() < dist[i][b].item(); });
    for (std::size_t m = 0; m < k; ++m) total = total.defined() ? add(total, dist[i][others[m]]) : dist[i][others[m]];
  }
  return scale(total, 1.0 / static_cast<double>(k * n));
}

LatentHierarchy inner_loop(const LiftModel& model, const Tensor& target, const partition::GridPartition& gp,
                           std::size_t steps, InnerMode mode) {
  LatentHierarchy z = LatentHierarchy::zeros(model.latent_shape(), steps > 0);
  if (steps == 0) return z;
  const bool graph = mode == InnerMode::SecondOrder;
  std::vector<Tensor> rates;
  for (std::size_t i = 0; i < 3; ++i) rates.push_back(graph ? model.inner_rate(i) : model.inner_rate(i).detach());
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<Tensor> current = z.tensors();
    std::vector<Tensor> g;
    {
      GradModeGuard on(true);
      Tensor loss = rec_loss(model.decode_regions(z, gp), target);
      g = grad(loss, current, graph);
    }
    std::vector<Tensor> next(3);
    if (graph) {
      for (std::size_t i = 0; i < 3; ++i) next[i] = sub(current[i], mul(rates[i], g[i]));
    } else {
      NoGradGuard off;
      const bool last = s + 1 == steps;
      for (std::size_t i = 0; i < 3; ++i) {
        Tensor v = sub(current[i].detach(), mul(rates[i], g[i]));
        if (!(last && mode == InnerMode::Inference)) v.set_requires_grad(true);
        next[i] = v;
      }
    }
    z = {next[0], next[1], next[2]};
  }
  return z;
}

LatentHierarchy inner_fit(const LiftModel& model, const Tensor& target, const partition::GridPartition& gp,
                          const MetaConfig& cfg) {
  return inner_loop(model, target, gp, cfg.t_inner, InnerMode::Inference);
}

OuterTrainer::OuterTrainer(LiftModel& model, std::vector<Tensor> targets, partition::GridPartition gp, MetaConfig cfg)
    : model_(model),
      gp_(std::move(gp)),
      cfg_(cfg),
      rng_(Rng(cfg.seed).split("outer-batches")),
      adam_(model.parameters(), AdamOptions{cfg.outer_lr, 0.9, 0.999, 1e-8}) {
  cfg_.validate();
  require(!targets.empty(), ErrorKind::Config, "meta-training needs a nonempty dataset");
  require(cfg_.batch_size <= targets.size(), ErrorKind::Config,
          "batch_size " + std::to_string(cfg_.batch_size) + " exceeds dataset size " + std::to_string(targets.size()));
  for (const auto& t : targets) targets_.push_back(nets::split_regions(t, gp_));
}

std::vector<std::size_t> OuterTrainer::sample_batch() {
  std::vector<std::size_t> order(targets_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < cfg_.batch_size; ++i) std::swap(order[i], order[i + rng_.index(order.size() - i)]);
  order.resize(cfg_.batch_size);
  return order;
}

IterationStats OuterTrainer::step() {
  const auto start = std::chrono::steady_clock::now();
  const auto batch = sample_batch();
  const InnerMode mode = cfg_.first_order ? InnerMode::FirstOrder : InnerMode::SecondOrder;
  const std::size_t b = batch.size();
  std::vector<Tensor> rec(b), alpha(b);
  auto work = [&](std::size_t e) {
    GradModeGuard on(true);
    const Tensor& target = targets_[batch[e]];
    LatentHierarchy z = inner_loop(model_, target, gp_, cfg_.t_inner, mode);
    alpha[e] = model_.generator().alpha(z);
    rec[e] = rec_loss(model_.bank().forward(gp_.local_coords, model_.generator().modulate(alpha[e])), target);
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg_.threads, b));
  if (workers == 1) {
    for (std::size_t e = 0; e < b; ++e) work(e);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t e = w; e < b; e += workers) work(e);
      });
    }
    for (auto& t : pool) t.join();
  }
  Tensor rec_total = rec[0];
  for (std::size_t e = 1; e < b; ++e) rec_total = add(rec_total, rec[e]);
  rec_total = scale(rec_total, 1.0 / static_cast<double>(b));
  Tensor total = rec_total;
  double smooth_value = 0.0;
  if (cfg_.lambda > 0) {
    Tensor smooth = smoothness_loss(alpha, cfg_.k_neighbors);
    smooth_value = smooth.item();
    total = add(total, scale(smooth, cfg_.lambda));
  }
  IterationStats stats;
  stats.iteration = iteration_ + 1;
  stats.rec = rec_total.item();
  stats.smooth = smooth_value;
  stats.total = total.item();
  if (!std::isfinite(stats.total)) {
    std::ostringstream msg;
    msg << "non-finite loss at outer iteration " << stats.iteration << " (rec=" << stats.rec
        << ", smooth=" << stats.smooth << "); try a smaller outer_lr or inner_lr";
    fail(ErrorKind::Numeric, msg.str());
  }
  adam_.zero_grad();
  if (total.requires_grad()) backward(total);
  adam_.step();
  ++iteration_;
  stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

std::vector<IterationStats> OuterTrainer::run(std::size_t iterations,
                                              const std::function<void(const IterationStats&)>& on_step) {
  std::vector<IterationStats> log;
  for (std::size_t i = 0; i < iterations; ++i) {
    log.push_back(step());
    if (on_step) on_step(log.back());
  }
  return log;
}

std::string OuterTrainer::state() const {
  std::ostringstream out(std::ios::binary);
  binio::write_u64(out, iteration_);
  binio::write_string(out, rng_.state());
  adam_.save_state(out);
  return out.str();
}

void OuterTrainer::restore(const std::string& state) {
  std::istringstream in(state, std::ios::binary);
  iteration_ = binio::read_u64(in);
  rng_.restore(binio::read_string(in));
  adam_.load_state(in);
}

}  // namespace lift::meta
