#include "signals/signal.hpp"

#include <cmath>

#include "common/error.hpp"
#include "ndgrad/ops.hpp"

namespace lift::signals {

SignalGrid SignalGrid::make(Tensor values, std::string source, double lo, double hi) {
  require(values.defined() && values.rank() >= 2 && values.rank() <= 4, ErrorKind::Dimension,
          "signal values must be [N_1..N_D, C] with D in 1..3");
  require(hi > lo, ErrorKind::Config, "signal domain must have hi > lo");
  for (double v : values.data()) {
    require(std::isfinite(v), ErrorKind::Numeric, "signal '" + source + "' contains non-finite values");
  }
  return SignalGrid{std::move(values), std::move(source), lo, hi};
}

Shape SignalGrid::shape() const { return Shape(values.shape().begin(), values.shape().end() - 1); }

std::size_t SignalGrid::points() const { return ndgrad::numel_of(shape()); }

Tensor SignalGrid::coords() const { return grid_coords(shape(), lo, hi); }

double axis_coordinate(std::size_t index, std::size_t extent, double lo, double hi) {
  if (extent <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(extent - 1);
}

Tensor grid_coords(const Shape& shape, double lo, double hi) {
  const std::size_t D = shape.size();
  const std::size_t n = ndgrad::numel_of(shape);
  std::vector<double> out(n * D);
  std::vector<std::size_t> idx(D, 0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t d = 0; d < D; ++d) out[p * D + d] = axis_coordinate(idx[d], shape[d], lo, hi);
    for (std::size_t d = D; d-- > 0;) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }
  return Tensor({n, D}, std::move(out));
}

Tensor as_rows(const Tensor& values) {
  const std::size_t c = values.shape().back();
  return ndgrad::reshape(values, {values.numel() / c, c});
}

Tensor from_rows(const Tensor& rows, const Shape& shape) {
  Shape full = shape;
  full.push_back(rows.shape().back());
  return ndgrad::reshape(rows, full);
}

}  // namespace lift::signals
