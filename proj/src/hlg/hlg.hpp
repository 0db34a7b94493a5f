#pragma once

#include <cstddef>
#include <vector>

#include "common/rng.hpp"
#include "nets/bank.hpp"
#include "ndgrad/tensor.hpp"

namespace lift::hlg {

using ndgrad::Shape;
using ndgrad::Tensor;

// Spatial extents are cubes of `side` cells in `dims` dimensions; the global
// latent always has side 1.
struct LatentShape {
  std::size_t dims = 2;
  std::size_t global_dim = 32;
  std::size_t mid_side = 2;
  std::size_t mid_dim = 16;
  std::size_t local_side = 4;
  std::size_t local_dim = 8;

  Shape global_shape() const;  // [1, ..., 1, d_g]
  Shape mid_shape() const;     // [P_i, ..., P_i, d_i]
  Shape local_shape() const;   // [P, ..., P, d_l]
  void validate() const;
};

// Global, intermediate and local latents of one signal, channels last.
struct LatentHierarchy {
  Tensor global;
  Tensor mid;
  Tensor local;

  static LatentHierarchy zeros(const LatentShape& shape, bool requires_grad = false);
  std::vector<Tensor> tensors() const { return {global, mid, local}; }
};

struct HlgConfig {
  LatentShape latents;
  std::size_t mid_out = 0;    // width of Linear1's output; 0 means mid_dim
  std::size_t alpha_dim = 0;  // width of the compositional latent; 0 means local_dim
  bool bias = true;           // biases on Linear1, Linear2 and the local projection
  bool use_hlg = true;        // false: modulations come from the local latent alone

  std::size_t resolved_mid_out() const { return mid_out ? mid_out : latents.mid_dim; }
  std::size_t resolved_alpha_dim() const { return alpha_dim ? alpha_dim : latents.local_dim; }
};

// Linear1: (d_g + d_i) -> d'; Linear2: (d' + d_l) -> d_alpha; local projection
// d_l -> d_alpha (HLG disabled); modulation map d_alpha -> depth * width, shared
// by every cell. Biases start at zero so zero latents give zero modulations.
class Hlg {
 public:
  Hlg() = default;
  Hlg(HlgConfig config, const nets::BankConfig& bank, Rng& rng);

  const HlgConfig& config() const { return config_; }

  // Z' = Linear1(Concat(Up(Z_global), Z_mid)); Z_alpha = Linear2(Concat(Up(Z'), Z_local)).
  Tensor compose(const LatentHierarchy& z) const;
  // Local latent projected to d_alpha (the ablation path without hierarchy).
  Tensor project_local(const Tensor& z_local) const;
  // Either compose or project_local, according to config().use_hlg.
  Tensor alpha(const LatentHierarchy& z) const;
  // Z_alpha [P..., d_alpha] -> shifts [R, depth, width], region order = flat index.
  Tensor modulate(const Tensor& z_alpha) const;
  Tensor modulations(const LatentHierarchy& z) const { return modulate(alpha(z)); }
  Tensor disable_hlg(const LatentHierarchy& z) const { return modulate(project_local(z.local)); }

  std::vector<Tensor> parameters() const;
  void set_parameters(const std::vector<Tensor>& values);

  Tensor w1, b1, w2, b2;          // hierarchy maps (use_hlg)
  Tensor w_local, b_local;        // local projection (!use_hlg)
  Tensor w_mod, b_mod;            // modulation map

 private:
  std::vector<Tensor*> slots();
  void check_latents(const LatentHierarchy& z) const;

  HlgConfig config_;
  nets::BankConfig bank_;
};

}  // namespace lift::hlg
