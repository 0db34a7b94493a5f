#include "meta/lift_model.hpp"

#include "common/error.hpp"
#include "ndgrad/ops.hpp"

namespace lift::meta {

using namespace ndgrad;

LiftModel::LiftModel(LiftConfig config, Rng& rng) : config_(config) {
  Rng bank_rng = rng.split("bank");
  Rng hlg_rng = rng.split("hlg");
  bank_ = nets::PMLPBank(config.bank, bank_rng);
  hlg_ = hlg::Hlg(config.hlg, config.bank, hlg_rng);
  require(config.inner_lr >= 0, ErrorKind::Config, "inner_lr must be >= 0");
  if (config.meta_sgd) rates_ = Tensor::full({3}, config.inner_lr, true);
}

Tensor LiftModel::decode_regions(const LatentHierarchy& z, const partition::GridPartition& gp) const {
  require(gp.spec.dims == config_.bank.spec.dims && gp.spec.per_dim == config_.bank.spec.per_dim,
          ErrorKind::Config, "grid partition does not match the model's partition");
  return bank_.forward(gp.local_coords, modulations(z));
}

Tensor LiftModel::decode(const LatentHierarchy& z, const partition::GridPartition& gp) const {
  return nets::assemble(decode_regions(z, gp), gp);
}

Tensor LiftModel::inner_rate(std::size_t i) const {
  require(i < 3, ErrorKind::Index, "latent index out of range");
  if (!config_.meta_sgd) return Tensor({1}, {config_.inner_lr});
  return abs(narrow(rates_, 0, i, 1));
}

std::vector<Tensor> LiftModel::parameters() const {
  std::vector<Tensor> params = bank_.parameters();
  for (const auto& t : hlg_.parameters()) params.push_back(t);
  if (rates_.defined()) params.push_back(rates_);
  return params;
}

void LiftModel::set_parameters(const std::vector<Tensor>& values) {
  const std::size_t nb = bank_.parameters().size(), nh = hlg_.parameters().size();
  const std::size_t nr = rates_.defined() ? 1 : 0;
  require(values.size() == nb + nh + nr, ErrorKind::Consistency,
          "model expects " + std::to_string(nb + nh + nr) + " tensors, got " + std::to_string(values.size()));
  bank_.set_parameters({values.begin(), values.begin() + nb});
  hlg_.set_parameters({values.begin() + nb, values.begin() + nb + nh});
  if (nr) {
    const Tensor& src = values.back();
    require(src.shape() == rates_.shape(), ErrorKind::Consistency, "inner-rate tensor has wrong shape");
    rates_ = Tensor(src.shape(), std::vector<double>(src.data().begin(), src.data().end()), true);
  }
}

nets::ModelHeader LiftModel::header() const {
  const auto& b = config_.bank;
  const auto& h = config_.hlg;
  nets::ModelHeader out;
  out.kind = nets::ModelKind::Lift;
  out.in_dim = static_cast<std::uint32_t>(b.spec.dims);
  out.out_dim = static_cast<std::uint32_t>(b.out_channels);
  out.depth = static_cast<std::uint32_t>(b.depth);
  out.width = static_cast<std::uint32_t>(b.width);
  out.omega0 = b.omega0;
  out.hidden_omega = b.omega0;
  out.gamma = b.gamma;
  out.residual = b.residual;
  out.dims = static_cast<std::uint32_t>(b.spec.dims);
  out.per_dim = static_cast<std::uint32_t>(b.spec.per_dim);
  out.use_hlg = h.use_hlg;
  out.meta_sgd = config_.meta_sgd;
  out.inner_lr = config_.inner_lr;
  out.linear_bias = h.bias;
  out.global_dim = static_cast<std::uint32_t>(h.latents.global_dim);
  out.mid_side = static_cast<std::uint32_t>(h.latents.mid_side);
  out.mid_dim = static_cast<std::uint32_t>(h.latents.mid_dim);
  out.local_side = static_cast<std::uint32_t>(h.latents.local_side);
  out.local_dim = static_cast<std::uint32_t>(h.latents.local_dim);
  out.mid_out = static_cast<std::uint32_t>(h.resolved_mid_out());
  out.alpha_dim = static_cast<std::uint32_t>(h.resolved_alpha_dim());
  return out;
}

LiftConfig LiftModel::config_from(const nets::ModelHeader& h) {
  require(h.kind == nets::ModelKind::Lift, ErrorKind::Consistency, "checkpoint holds a plain INR, not a LIFT model");
  LiftConfig c;
  c.bank.spec = partition::PartitionSpec::make(h.dims, h.per_dim);
  c.bank.depth = h.depth;
  c.bank.width = h.width;
  c.bank.out_channels = h.out_dim;
  c.bank.omega0 = h.omega0;
  c.bank.gamma = h.gamma;
  c.bank.residual = h.residual;
  c.hlg.latents = {h.dims, h.global_dim, h.mid_side, h.mid_dim, h.local_side, h.local_dim};
  c.hlg.mid_out = h.mid_out;
  c.hlg.alpha_dim = h.alpha_dim;
  c.hlg.bias = h.linear_bias;
  c.hlg.use_hlg = h.use_hlg;
  c.meta_sgd = h.meta_sgd;
  c.inner_lr = h.inner_lr;
  return c;
}

nets::Checkpoint LiftModel::to_checkpoint(std::string state) const {
  return nets::Checkpoint{header(), parameters(), std::move(state)};
}

LiftModel LiftModel::from_checkpoint(const nets::Checkpoint& ckpt) {
  Rng scratch(0);
  LiftModel model(config_from(ckpt.header), scratch);
  model.set_parameters(ckpt.tensors);
  return model;
}

}  // namespace lift::meta
