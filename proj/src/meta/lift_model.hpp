#pragma once

#include <string>
#include <vector>

#include "common/rng.hpp"
#include "hlg/hlg.hpp"
#include "nets/bank.hpp"
#include "nets/checkpoint.hpp"
#include "partition/partition.hpp"

namespace lift::meta {

using hlg::LatentHierarchy;
using ndgrad::Shape;
using ndgrad::Tensor;

struct LiftConfig {
  nets::BankConfig bank;
  hlg::HlgConfig hlg;
  bool meta_sgd = true;
  double inner_lr = 1.0;  // initial Meta-SGD rate, or the fixed rate otherwise
};

// P-MLP bank + latent generator + (optionally) learned inner-loop rates, one per
// latent tensor in the order global, intermediate, local.
class LiftModel {
 public:
  LiftModel() = default;
  LiftModel(LiftConfig config, Rng& rng);

  const LiftConfig& config() const { return config_; }
  const nets::PMLPBank& bank() const { return bank_; }
  const hlg::Hlg& generator() const { return hlg_; }
  const hlg::LatentShape& latent_shape() const { return config_.hlg.latents; }

  Tensor modulations(const LatentHierarchy& z) const { return hlg_.modulations(z); }
  // [R, n, C] outputs at the partition's local coordinates.
  Tensor decode_regions(const LatentHierarchy& z, const partition::GridPartition& gp) const;
  // Full grid [N..., C].
  Tensor decode(const LatentHierarchy& z, const partition::GridPartition& gp) const;

  // Inner-loop step size for latent tensor i (0 global, 1 intermediate, 2 local)
  // as a differentiable scalar-shaped [1] tensor.
  Tensor inner_rate(std::size_t i) const;
  const Tensor& rates() const { return rates_; }

  std::vector<Tensor> parameters() const;
  void set_parameters(const std::vector<Tensor>& values);

  nets::ModelHeader header() const;
  nets::Checkpoint to_checkpoint(std::string state = {}) const;
  static LiftModel from_checkpoint(const nets::Checkpoint& ckpt);
  static LiftConfig config_from(const nets::ModelHeader& header);

 private:
  LiftConfig config_;
  nets::PMLPBank bank_;
  hlg::Hlg hlg_;
  Tensor rates_;  // [3] when meta_sgd
};

}  // namespace lift::meta
