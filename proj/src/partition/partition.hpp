#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ndgrad/ops.hpp"
#include "ndgrad/tensor.hpp"

// Uniform decomposition of [0,1]^D into M^D axis-aligned boxes. Along each
// axis, box k (0-based) covers (k/M, (k+1)/M]; the first box also owns x = 0.
// Flat indices are row-major over the per-axis indices, first axis slowest.
namespace lift::partition {

struct PartitionSpec {
  std::size_t dims = 2;     // D, 1..3
  std::size_t per_dim = 1;  // M, >= 1

  static PartitionSpec make(std::size_t dims, std::size_t per_dim);
  std::size_t region_count() const;
  double lower(std::size_t k) const;  // a = k / M
  double upper(std::size_t k) const;  // b = (k + 1) / M
};

struct RegionIndex {
  std::size_t flat = 0;
  std::vector<std::size_t> multi;
};

std::vector<std::size_t> flat_to_multi(std::size_t flat, const PartitionSpec& spec);
std::size_t multi_to_flat(std::span<const std::size_t> multi, const PartitionSpec& spec);

bool indicator(std::span<const double> x, const RegionIndex& region, const PartitionSpec& spec);
RegionIndex locate(std::span<const double> x, const PartitionSpec& spec);

std::vector<double> to_local(std::span<const double> x, const RegionIndex& region, const PartitionSpec& spec);
std::vector<double> from_local(std::span<const double> local, const RegionIndex& region, const PartitionSpec& spec);

// (i - 1) / (N - 1) with 1-based i, written here 0-based: i / (N - 1).
double grid_coordinate(std::size_t index, std::size_t extent);

// Per-region view of a regular grid. Grid point (i_1..i_D) belongs to region
// (i_d / (N_d / M))_d. Rows of `local_coords` and entries of `global_index`
// are region-major: row r * points_per_region + j is point j of region r.
struct GridPartition {
  ndgrad::Shape grid;
  PartitionSpec spec;
  std::size_t points_per_region = 0;
  std::vector<std::size_t> global_index;
  ndgrad::IndexList gather_order;  // global flat index -> region-major row
  ndgrad::Tensor local_coords;     // [R, n, D]
  ndgrad::Tensor global_coords;    // [R, n, D]
};

GridPartition grid_partition(const ndgrad::Shape& grid, const PartitionSpec& spec);

}  // namespace lift::partition
