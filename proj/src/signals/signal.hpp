#pragma once

#include <cstddef>
#include <string>

#include "ndgrad/tensor.hpp"

namespace lift::signals {

using ndgrad::Shape;
using ndgrad::Tensor;

// Sampled signal with values [N_1, ..., N_D, C]. Grid index i along an axis of
// extent N maps to lo + (hi - lo) * i / (N - 1).
struct SignalGrid {
  Tensor values;
  std::string source;  // file path or synthesizer name
  double lo = 0.0;
  double hi = 1.0;

  static SignalGrid make(Tensor values, std::string source, double lo = 0.0, double hi = 1.0);

  std::size_t dims() const { return values.rank() - 1; }
  Shape shape() const;  // spatial extents only
  std::size_t channels() const { return values.shape().back(); }
  std::size_t points() const;
  // [points, D] coordinates, row-major over the grid.
  Tensor coords() const;
};

// [numel(shape), D] with coordinates lo + (hi - lo) * i_d / (N_d - 1); an axis
// of extent 1 maps to lo.
Tensor grid_coords(const Shape& shape, double lo = 0.0, double hi = 1.0);
double axis_coordinate(std::size_t index, std::size_t extent, double lo = 0.0, double hi = 1.0);

// Flattens [N..., C] to [points, C] and back.
Tensor as_rows(const Tensor& values);
Tensor from_rows(const Tensor& rows, const Shape& shape);

}  // namespace lift::signals
