#pragma once

#include <string>
#include <vector>

#include "common/rng.hpp"
#include "gradcheck.hpp"
#include "nets/bank.hpp"
#include "partition/partition.hpp"

// Exhaustive-enumeration oracle for the partition module.
namespace lift::testing {

// Region along one axis by scanning every box: k with k/M < x <= (k+1)/M, or 0 at x = 0.
inline std::size_t scan_axis(double x, std::size_t M) {
  if (x == 0.0) return 0;
  for (std::size_t k = 0; k < M; ++k) {
    if (static_cast<double>(k) / static_cast<double>(M) < x && x <= static_cast<double>(k + 1) / static_cast<double>(M)) {
      return k;
    }
  }
  return M;  // outside [0, 1]
}

// All multi-indices of an M^D lattice in nested-loop order, first axis outermost.
inline std::vector<std::vector<std::size_t>> enumerate_lattice(std::size_t D, std::size_t M) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(D, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t axis) {
    if (axis == D) {
      out.push_back(cur);
      return;
    }
    for (std::size_t k = 0; k < M; ++k) {
      cur[axis] = k;
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

// Returns a description of the first disagreement, or "" when everything agrees.
inline std::string partition_disagreement(std::size_t D, std::size_t M, Rng& rng) {
  using namespace partition;
  const auto spec = PartitionSpec::make(D, M);
  const auto lattice = enumerate_lattice(D, M);
  if (lattice.size() != spec.region_count()) return "region count";
  for (std::size_t f = 0; f < lattice.size(); ++f) {
    if (flat_to_multi(f, spec) != lattice[f]) return "flat_to_multi(" + std::to_string(f) + ")";
    if (multi_to_flat(lattice[f], spec) != f) return "multi_to_flat(" + std::to_string(f) + ")";
  }
  // Probe points: random interior points, every box corner and edge midpoints.
  std::vector<std::vector<double>> points;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(D);
    for (auto& v : x) v = rng.uniform(0.0, 1.0);
    points.push_back(x);
  }
  const auto fine = enumerate_lattice(D, 2 * M + 1);
  for (const auto& c : fine) {
    std::vector<double> x(D);
    for (std::size_t d = 0; d < D; ++d) x[d] = static_cast<double>(c[d]) / static_cast<double>(2 * M);
    points.push_back(x);
  }
  for (const auto& x : points) {
    std::vector<std::size_t> expected(D);
    for (std::size_t d = 0; d < D; ++d) expected[d] = scan_axis(x[d], M);
    std::size_t flat = 0;
    for (std::size_t f = 0; f < lattice.size(); ++f) {
      if (lattice[f] == expected) flat = f;
    }
    const RegionIndex r = locate(x, spec);
    if (r.multi != expected || r.flat != flat) return "locate";
    std::size_t hits = 0;
    for (std::size_t f = 0; f < lattice.size(); ++f) hits += indicator(x, RegionIndex{f, lattice[f]}, spec) ? 1 : 0;
    if (hits != 1) return "indicator is not a partition of unity";
  }
  // Grid partition: every grid point exactly once, in its block's region, and
  // assemble(split) is the identity.
  for (std::size_t b : {1u, 2u, 3u}) {
    ndgrad::Shape grid(D, M * b);
    const auto gp = grid_partition(grid, spec);
    std::vector<int> seen(ndgrad::numel_of(grid), 0);
    for (std::size_t row = 0; row < gp.global_index.size(); ++row) {
      const std::size_t r = row / gp.points_per_region;
      std::size_t rest = gp.global_index[row];
      std::vector<std::size_t> idx(D);
      for (std::size_t d = D; d-- > 0;) {
        idx[d] = rest % grid[d];
        rest /= grid[d];
      }
      std::vector<std::size_t> block(D);
      for (std::size_t d = 0; d < D; ++d) block[d] = idx[d] / b;
      if (block != lattice[r]) return "grid_partition block assignment";
      ++seen[gp.global_index[row]];
    }
    for (int s : seen) {
      if (s != 1) return "grid_partition coverage";
    }
    ndgrad::Shape with_channels = grid;
    with_channels.push_back(2);
    const auto values = random_tensor(with_channels, rng);
    const auto back = nets::assemble(nets::split_regions(values, gp), gp);
    if (back.shape() != values.shape()) return "assemble shape";
    for (std::size_t i = 0; i < values.numel(); ++i) {
      if (back.data()[i] != values.data()[i]) return "assemble(split) identity";
    }
  }
  return "";
}

}  // namespace lift::testing
