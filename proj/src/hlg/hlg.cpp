#include "hlg/hlg.hpp"

#include <cmath>

#include "common/error.hpp"
#include "ndgrad/ops.hpp"
#include "nets/layers.hpp"

namespace lift::hlg {

using namespace ndgrad;

namespace {

Shape cube(std::size_t dims, std::size_t side, std::size_t channels) {
  Shape s(dims, side);
  s.push_back(channels);
  return s;
}

Tensor uniform_weight(std::size_t out, std::size_t in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::vector<double> w(out * in);
  for (auto& v : w) v = rng.uniform(-bound, bound);
  return Tensor({out, in}, std::move(w), true);
}

Shape spatial_of(const Tensor& t) { return Shape(t.shape().begin(), t.shape().end() - 1); }

}  // namespace

Shape LatentShape::global_shape() const { return cube(dims, 1, global_dim); }
Shape LatentShape::mid_shape() const { return cube(dims, mid_side, mid_dim); }
Shape LatentShape::local_shape() const { return cube(dims, local_side, local_dim); }

void LatentShape::validate() const {
  require(dims >= 1 && dims <= 3, ErrorKind::Config, "latent dims must be 1..3");
  require(global_dim >= 1 && mid_dim >= 1 && local_dim >= 1, ErrorKind::Config, "latent channel widths must be >= 1");
  require(mid_side >= 1 && local_side >= 1, ErrorKind::Config, "latent sides must be >= 1");
  require(local_side % mid_side == 0, ErrorKind::Config,
          "intermediate side " + std::to_string(mid_side) + " must divide local side " + std::to_string(local_side));
}

LatentHierarchy LatentHierarchy::zeros(const LatentShape& shape, bool requires_grad) {
  return {Tensor::zeros(shape.global_shape(), requires_grad), Tensor::zeros(shape.mid_shape(), requires_grad),
          Tensor::zeros(shape.local_shape(), requires_grad)};
}

Hlg::Hlg(HlgConfig config, const nets::BankConfig& bank, Rng& rng) : config_(config), bank_(bank) {
  const LatentShape& ls = config.latents;
  ls.validate();
  require(ls.dims == bank.spec.dims, ErrorKind::Config,
          "latent dims " + std::to_string(ls.dims) + " differ from partition dims " + std::to_string(bank.spec.dims));
  require(ls.local_side == bank.spec.per_dim, ErrorKind::Config,
          "local latent side " + std::to_string(ls.local_side) + " must equal regions per dimension " +
              std::to_string(bank.spec.per_dim));
  const std::size_t dp = config.resolved_mid_out(), da = config.resolved_alpha_dim();
  auto zero_bias = [&](std::size_t n) { return config.bias ? Tensor::zeros({n}, true) : Tensor(); };
  if (config.use_hlg) {
    w1 = uniform_weight(dp, ls.global_dim + ls.mid_dim, rng);
    b1 = zero_bias(dp);
    w2 = uniform_weight(da, dp + ls.local_dim, rng);
    b2 = zero_bias(da);
  } else {
    w_local = uniform_weight(da, ls.local_dim, rng);
    b_local = zero_bias(da);
  }
  w_mod = uniform_weight(bank.modulation_slots(), da, rng);
  b_mod = Tensor::zeros({bank.modulation_slots()}, true);
}

void Hlg::check_latents(const LatentHierarchy& z) const {
  const LatentShape& ls = config_.latents;
  auto check = [](const Tensor& t, const Shape& want, const char* name) {
    require(t.defined() && t.shape() == want, ErrorKind::Config,
            std::string(name) + " latent " + (t.defined() ? shape_str(t.shape()) : "<missing>") + " expected " +
                shape_str(want));
  };
  if (config_.use_hlg) {
    check(z.global, ls.global_shape(), "global");
    check(z.mid, ls.mid_shape(), "intermediate");
  }
  check(z.local, ls.local_shape(), "local");
}

Tensor Hlg::compose(const LatentHierarchy& z) const {
  require(config_.use_hlg, ErrorKind::Config, "compose needs the hierarchy maps (HLG is disabled)");
  check_latents(z);
  Tensor up_global = nearest_upsample(z.global, spatial_of(z.mid));
  Tensor z_prime = nets::linear(concat_lastdim(up_global, z.mid), w1, b1);
  Tensor up_mid = nearest_upsample(z_prime, spatial_of(z.local));
  return nets::linear(concat_lastdim(up_mid, z.local), w2, b2);
}

Tensor Hlg::project_local(const Tensor& z_local) const {
  require(!config_.use_hlg, ErrorKind::Config, "local projection exists only with HLG disabled");
  require(z_local.defined() && z_local.shape() == config_.latents.local_shape(), ErrorKind::Config,
          "local latent has wrong shape");
  return nets::linear(z_local, w_local, b_local);
}

Tensor Hlg::alpha(const LatentHierarchy& z) const {
  if (config_.use_hlg) return compose(z);
  check_latents(z);
  return project_local(z.local);
}

Tensor Hlg::modulate(const Tensor& z_alpha) const {
  const std::size_t R = bank_.spec.region_count();
  const std::size_t da = config_.resolved_alpha_dim();
  require(z_alpha.numel() == R * da && z_alpha.shape().back() == da, ErrorKind::Config,
          "compositional latent " + shape_str(z_alpha.shape()) + " does not fit " + std::to_string(R) +
              " regions of width " + std::to_string(da));
  Tensor rows = reshape(z_alpha, {R, da});
  return reshape(nets::linear(rows, w_mod, b_mod), bank_.modulation_shape());
}

std::vector<Tensor*> Hlg::slots() { return {&w1, &b1, &w2, &b2, &w_local, &b_local, &w_mod, &b_mod}; }

std::vector<Tensor> Hlg::parameters() const {
  std::vector<Tensor> out;
  for (Tensor* t : const_cast<Hlg*>(this)->slots()) {
    if (t->defined()) out.push_back(*t);
  }
  return out;
}

void Hlg::set_parameters(const std::vector<Tensor>& values) {
  std::size_t i = 0;
  for (Tensor* t : slots()) {
    if (!t->defined()) continue;
    require(i < values.size(), ErrorKind::Consistency, "HLG parameter count mismatch");
    const Tensor& src = values[i++];
    require(src.shape() == t->shape(), ErrorKind::Consistency,
            "HLG parameter shape mismatch: " + shape_str(t->shape()) + " vs " + shape_str(src.shape()));
    *t = Tensor(src.shape(), std::vector<double>(src.data().begin(), src.data().end()), true);
  }
  require(i == values.size(), ErrorKind::Consistency, "HLG parameter count mismatch");
}

}  // namespace lift::hlg
