#pragma once

#include <cstddef>
#include <vector>

#include "common/rng.hpp"
#include "ndgrad/tensor.hpp"
#include "partition/partition.hpp"

namespace lift::nets {

using ndgrad::Shape;
using ndgrad::Tensor;

struct BankConfig {
  partition::PartitionSpec spec;
  std::size_t depth = 1;  // sine layers (L - 1); the output layer is linear
  std::size_t width = 64;
  std::size_t out_channels = 3;
  double omega0 = 20.0;
  double gamma = 1.0;     // first-layer frequency scale
  bool residual = false;  // residual on hidden sine layers (ReLIFT)

  std::size_t modulation_slots() const { return depth * width; }
  Shape modulation_shape() const;  // [R, depth, width]
};

// M^D independent MLPs evaluated together. Layer l holds W [R, out, in] and
// b [R, out]; every layer is one batched matmul over the region axis.
class PMLPBank {
 public:
  PMLPBank() = default;
  PMLPBank(BankConfig config, Rng& rng);

  const BankConfig& config() const { return config_; }
  std::size_t region_count() const { return config_.spec.region_count(); }

  // local_coords [R, n, D]; mods [R, depth, width] or undefined for none.
  // Returns [R, n, C].
  Tensor forward(const Tensor& local_coords, const Tensor& mods = Tensor()) const;
  // Same computation for one region with an explicit loop (reference path).
  Tensor forward_region(std::size_t region, const Tensor& coords, const Tensor& mods = Tensor()) const;

  std::vector<Tensor> parameters() const;
  void set_parameters(const std::vector<Tensor>& values);

  const std::vector<Tensor>& weights() const { return weights_; }
  const std::vector<Tensor>& biases() const { return biases_; }

 private:
  void check_mods(const Tensor& mods) const;

  BankConfig config_;
  std::vector<Tensor> weights_;  // depth + 1 entries
  std::vector<Tensor> biases_;
};

// Per-region outputs [R, n, C] -> full grid [N_1, ..., N_D, C]. `global_index`
// lists, region-major, the flat grid index of each row; it must hit every grid
// point exactly once.
Tensor assemble(const Tensor& per_region, const std::vector<std::size_t>& global_index, const Shape& grid);
Tensor assemble(const Tensor& per_region, const partition::GridPartition& gp);
// Grid values [N..., C] -> [R, n, C] in grid_partition order.
Tensor split_regions(const Tensor& grid_values, const partition::GridPartition& gp);

}  // namespace lift::nets
