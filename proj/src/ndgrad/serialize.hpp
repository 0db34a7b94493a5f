#pragma once

#include <iosfwd>
#include <string>

#include "ndgrad/tensor.hpp"

// Tensor wire format (little-endian): "LFT1", u32 rank, rank x u64 dims, then
// numel x float64 payload in row-major order.
namespace lift::ndgrad {

void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);

void save_tensor(const std::string& path, const Tensor& t);
Tensor load_tensor(const std::string& path);

}  // namespace lift::ndgrad
