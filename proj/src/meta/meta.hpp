#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "meta/lift_model.hpp"
#include "ndgrad/optim.hpp"

namespace lift::meta {

struct MetaConfig {
  std::size_t t_inner = 3;
  double inner_lr = 1.0;
  double outer_lr = 5e-4;
  bool meta_sgd = true;
  std::size_t k_neighbors = 8;
  double lambda = 1e-4;  // (1/100)^2
  std::size_t batch_size = 16;
  std::size_t iterations = 2000;
  std::uint64_t seed = 0;
  bool first_order = false;
  std::size_t threads = 1;

  void validate() const;
};

// Mean over points and channels of squared error.
Tensor rec_loss(const Tensor& pred, const Tensor& target);

// For each latent, mean squared Euclidean distance to its K nearest neighbours
// in the batch; averaged over the batch. Needs more than K latents.
Tensor smoothness_loss(const std::vector<Tensor>& alphas, std::size_t k);

enum class InnerMode {
  Inference,    // no graph; latents returned detached
  SecondOrder,  // unrolled, differentiable w.r.t. weights and rates
  FirstOrder,   // latents detached between steps
};

// `steps` SGD steps on zero-initialized latents minimizing rec_loss against
// `target` given in region layout [R, n, C].
LatentHierarchy inner_loop(const LiftModel& model, const Tensor& target, const partition::GridPartition& gp,
                           std::size_t steps, InnerMode mode);
LatentHierarchy inner_fit(const LiftModel& model, const Tensor& target, const partition::GridPartition& gp,
                          const MetaConfig& cfg);

struct IterationStats {
  std::size_t iteration = 0;  // 1-based count of completed outer steps
  double rec = 0.0;
  double smooth = 0.0;
  double total = 0.0;
  double wall_ms = 0.0;
};

// Outer loop: Adam on every model parameter, gradients through the inner loop.
class OuterTrainer {
 public:
  // `targets` are full grids [N..., C], all with the partition's grid shape.
  OuterTrainer(LiftModel& model, std::vector<Tensor> targets, partition::GridPartition gp, MetaConfig cfg);

  IterationStats step();
  std::vector<IterationStats> run(std::size_t iterations,
                                  const std::function<void(const IterationStats&)>& on_step = {});
  std::size_t iteration() const { return iteration_; }

  // Serialized iteration counter, sampler RNG and Adam moments.
  std::string state() const;
  void restore(const std::string& state);

 private:
  std::vector<std::size_t> sample_batch();

  LiftModel& model_;
  std::vector<Tensor> targets_;  // region layout
  partition::GridPartition gp_;
  MetaConfig cfg_;
  Rng rng_;
  ndgrad::Adam adam_;
  std::size_t iteration_ = 0;
};

}  // namespace lift::meta
