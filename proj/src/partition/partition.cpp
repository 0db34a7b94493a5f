#include "partition/partition.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "common/error.hpp"

namespace lift::partition {

PartitionSpec PartitionSpec::make(std::size_t dims, std::size_t per_dim) {
  require(dims >= 1 && dims <= 3, ErrorKind::Config, "partition dimensionality must be 1..3, got " + std::to_string(dims));
  require(per_dim >= 1, ErrorKind::Config, "regions per dimension must be >= 1");
  return PartitionSpec{dims, per_dim};
}

std::size_t PartitionSpec::region_count() const {
  std::size_t n = 1;
  for (std::size_t d = 0; d < dims; ++d) n *= per_dim;
  return n;
}

double PartitionSpec::lower(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(per_dim); }
double PartitionSpec::upper(std::size_t k) const { return static_cast<double>(k + 1) / static_cast<double>(per_dim); }

std::vector<std::size_t> flat_to_multi(std::size_t flat, const PartitionSpec& spec) {
  require(flat < spec.region_count(), ErrorKind::Index,
          "region index " + std::to_string(flat) + " out of range [0, " + std::to_string(spec.region_count()) + ")");
  std::vector<std::size_t> multi(spec.dims);
  std::size_t power = spec.region_count();
  for (std::size_t d = 0; d < spec.dims; ++d) {
    power /= spec.per_dim;  // M^(D-d), 1-based d
    multi[d] = (flat / power) % spec.per_dim;
  }
  return multi;
}

std::size_t multi_to_flat(std::span<const std::size_t> multi, const PartitionSpec& spec) {
  require(multi.size() == spec.dims, ErrorKind::Index, "multi-index has wrong arity");
  std::size_t flat = 0;
  for (auto k : multi) {
    require(k < spec.per_dim, ErrorKind::Index, "per-axis region index " + std::to_string(k) + " >= M");
    flat = flat * spec.per_dim + k;
  }
  return flat;
}

namespace {

void check_point(std::span<const double> x, const PartitionSpec& spec) {
  require(x.size() == spec.dims, ErrorKind::Domain,
          "point has " + std::to_string(x.size()) + " coordinates, partition has D=" + std::to_string(spec.dims));
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream msg;
      msg << "coordinate " << v << " outside [0, 1]";
      fail(ErrorKind::Domain, msg.str());
    }
  }
}

bool in_interval(double v, std::size_t k, const PartitionSpec& spec) {
  if (k == 0 && v == 0.0) return true;
  return spec.lower(k) < v && v <= spec.upper(k);
}

}  // namespace

bool indicator(std::span<const double> x, const RegionIndex& region, const PartitionSpec& spec) {
  check_point(x, spec);
  for (std::size_t d = 0; d < spec.dims; ++d) {
    if (!in_interval(x[d], region.multi[d], spec)) return false;
  }
  return true;
}

RegionIndex locate(std::span<const double> x, const PartitionSpec& spec) {
  check_point(x, spec);
  RegionIndex region;
  region.multi.resize(spec.dims);
  const double m = static_cast<double>(spec.per_dim);
  for (std::size_t d = 0; d < spec.dims; ++d) {
    const double v = x[d];
    std::size_t k = v == 0.0 ? 0 : static_cast<std::size_t>(std::max(0.0, std::ceil(v * m) - 1.0));
    k = std::min(k, spec.per_dim - 1);
    // Settle rounding at the boundaries against the exact interval test.
    while (k > 0 && v <= spec.lower(k)) --k;
    while (k + 1 < spec.per_dim && v > spec.upper(k)) ++k;
    region.multi[d] = k;
  }
  region.flat = multi_to_flat(region.multi, spec);
  return region;
}

std::vector<double> to_local(std::span<const double> x, const RegionIndex& region, const PartitionSpec& spec) {
  if (!indicator(x, region, spec)) {
    fail(ErrorKind::Consistency, "point is not inside region " + std::to_string(region.flat));
  }
  std::vector<double> local(spec.dims);
  const double m = static_cast<double>(spec.per_dim);
  for (std::size_t d = 0; d < spec.dims; ++d) local[d] = (x[d] - spec.lower(region.multi[d])) * m;
  return local;
}

std::vector<double> from_local(std::span<const double> local, const RegionIndex& region, const PartitionSpec& spec) {
  require(local.size() == spec.dims, ErrorKind::Domain, "local point arity mismatch");
  std::vector<double> x(spec.dims);
  const double m = static_cast<double>(spec.per_dim);
  for (std::size_t d = 0; d < spec.dims; ++d) x[d] = spec.lower(region.multi[d]) + local[d] / m;
  return x;
}

double grid_coordinate(std::size_t index, std::size_t extent) {
  if (extent <= 1) return 0.0;
  return static_cast<double>(index) / static_cast<double>(extent - 1);
}

GridPartition grid_partition(const ndgrad::Shape& grid, const PartitionSpec& spec) {
  require(grid.size() == spec.dims, ErrorKind::Config,
          "grid " + ndgrad::shape_str(grid) + " does not have D=" + std::to_string(spec.dims) + " axes");
  for (auto n : grid) {
    if (n % spec.per_dim != 0) {
      std::size_t g = 0;
      for (auto e : grid) g = std::gcd(g, e);
      std::ostringstream msg;
      msg << "grid " << ndgrad::shape_str(grid) << " is not divisible into M=" << spec.per_dim
          << " regions per axis; valid M values:";
      for (std::size_t cand = 1; cand <= g; ++cand) {
        if (g % cand == 0) msg << ' ' << cand;
      }
      fail(ErrorKind::Config, msg.str());
    }
  }
  const std::size_t D = spec.dims;
  const std::size_t R = spec.region_count();
  std::vector<std::size_t> block(D);
  for (std::size_t d = 0; d < D; ++d) block[d] = grid[d] / spec.per_dim;
  std::size_t n = 1;
  for (auto b : block) n *= b;

  GridPartition out;
  out.grid = grid;
  out.spec = spec;
  out.points_per_region = n;
  out.global_index.resize(R * n);
  std::vector<double> local(R * n * D), global(R * n * D);
  std::vector<std::size_t> grid_strides(D, 1);
  for (std::size_t d = D; d-- > 1;) grid_strides[d - 1] = grid_strides[d] * grid[d];

  std::vector<std::size_t> j(D);
  for (std::size_t r = 0; r < R; ++r) {
    const auto k = flat_to_multi(r, spec);
    std::fill(j.begin(), j.end(), 0);
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t flat = 0;
      const std::size_t row = r * n + p;
      for (std::size_t d = 0; d < D; ++d) {
        const std::size_t i = k[d] * block[d] + j[d];
        flat += i * grid_strides[d];
        const double x = grid_coordinate(i, grid[d]);
        global[row * D + d] = x;
        local[row * D + d] = (x - spec.lower(k[d])) * static_cast<double>(spec.per_dim);
      }
      out.global_index[row] = flat;
      for (std::size_t d = D; d-- > 0;) {
        if (++j[d] < block[d]) break;
        j[d] = 0;
      }
    }
  }
  auto order = std::make_shared<std::vector<std::size_t>>(R * n);
  for (std::size_t row = 0; row < R * n; ++row) (*order)[out.global_index[row]] = row;
  out.gather_order = std::move(order);
  out.local_coords = ndgrad::Tensor({R, n, D}, std::move(local));
  out.global_coords = ndgrad::Tensor({R, n, D}, std::move(global));
  return out;
}

}  // namespace lift::partition
