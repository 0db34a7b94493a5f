#include "nets/bank.hpp"

#include <memory>

#include "common/error.hpp"
#include "nets/layers.hpp"
#include "ndgrad/ops.hpp"

namespace lift::nets {

using namespace ndgrad;

Shape BankConfig::modulation_shape() const { return {spec.region_count(), depth, width}; }

PMLPBank::PMLPBank(BankConfig config, Rng& rng) : config_(config) {
  require(config.depth >= 1, ErrorKind::Config, "bank needs at least one sine layer");
  require(config.width >= 1 && config.out_channels >= 1, ErrorKind::Config, "empty bank widths");
  require(config.omega0 > 0 && config.gamma >= 1.0, ErrorKind::Config, "bank needs omega0 > 0 and gamma >= 1");
  const std::size_t R = config.spec.region_count();
  for (std::size_t l = 0; l <= config.depth; ++l) {
    const bool first = l == 0, last = l == config.depth;
    const std::size_t in = first ? config.spec.dims : config.width;
    const std::size_t out = last ? config.out_channels : config.width;
    std::vector<double> w, b;
    w.reserve(R * out * in);
    b.reserve(R * out);
    for (std::size_t r = 0; r < R; ++r) {
      auto wr = siren_weights(out, in, config.omega0, first, rng);
      auto br = siren_biases(out, in, rng);
      w.insert(w.end(), wr.begin(), wr.end());
      b.insert(b.end(), br.begin(), br.end());
    }
    weights_.emplace_back(Shape{R, out, in}, std::move(w), true);
    biases_.emplace_back(Shape{R, out}, std::move(b), true);
  }
}

void PMLPBank::check_mods(const Tensor& mods) const {
  if (!mods.defined()) return;
  if (mods.shape() != config_.modulation_shape()) {
    fail(ErrorKind::Config, "modulations " + shape_str(mods.shape()) + " do not match bank " +
                                shape_str(config_.modulation_shape()));
  }
}

Tensor PMLPBank::forward(const Tensor& local_coords, const Tensor& mods) const {
  const std::size_t R = region_count();
  require(local_coords.rank() == 3 && local_coords.dim(0) == R && local_coords.dim(2) == config_.spec.dims,
          ErrorKind::Config,
          "local coordinates " + shape_str(local_coords.shape()) + " do not fit a bank with " + std::to_string(R) +
              " regions in " + std::to_string(config_.spec.dims) + "D");
  check_mods(mods);
  Tensor h = local_coords;
  for (std::size_t l = 0; l <= config_.depth; ++l) {
    const Tensor& w = weights_[l];
    Tensor pre = add(matmul(h, w, false, true), reshape(biases_[l], {R, 1, w.dim(1)}));
    if (l == config_.depth) return pre;
    if (mods.defined()) pre = add(pre, narrow(mods, 1, l, 1));
    const double omega = l == 0 ? config_.omega0 * config_.gamma : config_.omega0;
    Tensor y = sin_act(pre, omega);
    h = (config_.residual && l > 0) ? add(y, h) : y;
  }
  return h;
}

Tensor PMLPBank::forward_region(std::size_t region, const Tensor& coords, const Tensor& mods) const {
  require(region < region_count(), ErrorKind::Index, "region out of range");
  check_mods(mods);
  Tensor h = coords;
  for (std::size_t l = 0; l <= config_.depth; ++l) {
    const Tensor& w = weights_[l];
    const std::size_t out = w.dim(1), in = w.dim(2);
    Tensor wr = reshape(narrow(w, 0, region, 1), {out, in});
    Tensor br = reshape(narrow(biases_[l], 0, region, 1), {out});
    Tensor pre = linear(h, wr, br);
    if (l == config_.depth) return pre;
    if (mods.defined()) pre = add(pre, reshape(narrow(narrow(mods, 0, region, 1), 1, l, 1), {out}));
    const double omega = l == 0 ? config_.omega0 * config_.gamma : config_.omega0;
    Tensor y = sin_act(pre, omega);
    h = (config_.residual && l > 0) ? add(y, h) : y;
  }
  return h;
}

std::vector<Tensor> PMLPBank::parameters() const {
  std::vector<Tensor> params;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    params.push_back(weights_[l]);
    params.push_back(biases_[l]);
  }
  return params;
}

void PMLPBank::set_parameters(const std::vector<Tensor>& values) {
  require(values.size() == 2 * weights_.size(), ErrorKind::Consistency, "bank parameter count mismatch");
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (int k = 0; k < 2; ++k) {
      Tensor& dst = k == 0 ? weights_[l] : biases_[l];
      const Tensor& src = values[2 * l + k];
      require(dst.shape() == src.shape(), ErrorKind::Consistency,
              "bank parameter shape mismatch: " + shape_str(dst.shape()) + " vs " + shape_str(src.shape()));
      dst = Tensor(src.shape(), std::vector<double>(src.data().begin(), src.data().end()), true);
    }
  }
}

Tensor assemble(const Tensor& per_region, const std::vector<std::size_t>& global_index, const Shape& grid) {
  require(per_region.rank() == 3, ErrorKind::Assembly, "per-region outputs must be [R, n, C], got " +
                                                           shape_str(per_region.shape()));
  const std::size_t rows = per_region.dim(0) * per_region.dim(1);
  const std::size_t C = per_region.dim(2);
  const std::size_t total = numel_of(grid);
  require(global_index.size() == rows, ErrorKind::Assembly,
          "index list has " + std::to_string(global_index.size()) + " entries for " + std::to_string(rows) + " rows");
  std::vector<std::size_t> order(total, rows);
  for (std::size_t row = 0; row < rows; ++row) {
    const std::size_t g = global_index[row];
    require(g < total, ErrorKind::Assembly, "grid index " + std::to_string(g) + " out of range");
    require(order[g] == rows, ErrorKind::Assembly, "grid index " + std::to_string(g) + " covered twice");
    order[g] = row;
  }
  for (std::size_t g = 0; g < total; ++g) {
    require(order[g] != rows, ErrorKind::Assembly, "grid index " + std::to_string(g) + " not covered");
  }
  auto index = std::make_shared<const std::vector<std::size_t>>(std::move(order));
  Tensor flat = gather_rows(reshape(per_region, {rows, C}), index);
  Shape out = grid;
  out.push_back(C);
  return reshape(flat, out);
}

Tensor assemble(const Tensor& per_region, const partition::GridPartition& gp) {
  require(per_region.rank() == 3 && per_region.dim(0) == gp.spec.region_count() &&
              per_region.dim(1) == gp.points_per_region,
          ErrorKind::Assembly, "per-region outputs " + shape_str(per_region.shape()) + " do not match the partition");
  const std::size_t rows = per_region.dim(0) * per_region.dim(1);
  const std::size_t C = per_region.dim(2);
  Tensor flat = gather_rows(reshape(per_region, {rows, C}), gp.gather_order);
  Shape out = gp.grid;
  out.push_back(C);
  return reshape(flat, out);
}

Tensor split_regions(const Tensor& grid_values, const partition::GridPartition& gp) {
  const std::size_t total = numel_of(gp.grid);
  require(grid_values.rank() == gp.grid.size() + 1 && grid_values.numel() % total == 0, ErrorKind::Dimension,
          "grid values " + shape_str(grid_values.shape()) + " do not match grid " + shape_str(gp.grid));
  for (std::size_t d = 0; d < gp.grid.size(); ++d) {
    require(grid_values.dim(d) == gp.grid[d], ErrorKind::Dimension,
            "grid values " + shape_str(grid_values.shape()) + " do not match grid " + shape_str(gp.grid));
  }
  const std::size_t C = grid_values.shape().back();
  auto index = std::make_shared<const std::vector<std::size_t>>(gp.global_index);
  Tensor rows = gather_rows(reshape(grid_values, {total, C}), index);
  return reshape(rows, {gp.spec.region_count(), gp.points_per_region, C});
}

}  // namespace lift::nets
