#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nets/layers.hpp"

// Checkpoint byte layout (little-endian):
//   "LFTC", u32 version (=1), u32 kind (0 plain INR, 1 LIFT)
//   u32 in_dim, u32 out_dim, u32 depth, u32 width
//   f64 omega0, f64 hidden_omega, f64 gamma, f64 inner_lr, u8 residual
//   u32 dims, u32 per_dim, u8 use_hlg, u8 meta_sgd, u8 linear_bias
//   u32 global_dim, mid_side, mid_dim, local_side, local_dim, mid_out, alpha_dim
//     (plain INRs reuse mid_out for the first-layer width, 0 = same as width)
//   u32 tensor count, then that many LFT1 tensors in the model's fixed order
//   u32 state length, state bytes (optimizer/RNG state for resuming; may be empty)
namespace lift::nets {

enum class ModelKind : std::uint32_t { Inr = 0, Lift = 1 };

struct ModelHeader {
  ModelKind kind = ModelKind::Inr;
  std::uint32_t in_dim = 2, out_dim = 3, depth = 3, width = 256;
  double omega0 = 30.0, hidden_omega = 30.0, gamma = 1.0;
  double inner_lr = 0.0;  // LIFT inner-loop rate
  bool residual = false;
  std::uint32_t dims = 0, per_dim = 0;
  bool use_hlg = false, meta_sgd = false, linear_bias = true;
  std::uint32_t global_dim = 0, mid_side = 0, mid_dim = 0, local_side = 0, local_dim = 0, mid_out = 0,
                alpha_dim = 0;

  // Compact architecture description used in mismatch diagnostics.
  std::string fingerprint() const;
  bool same_architecture(const ModelHeader& other) const;
};

struct Checkpoint {
  ModelHeader header;
  std::vector<Tensor> tensors;
  std::string state;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

ModelHeader header_for(const InrConfig& config);
InrConfig inr_config_from(const ModelHeader& header);
Checkpoint inr_checkpoint(const Inr& net, std::string state = {});
Inr inr_from_checkpoint(const Checkpoint& ckpt);

}  // namespace lift::nets
