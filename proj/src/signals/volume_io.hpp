#pragma once

#include <string>

#include "signals/signal.hpp"

// Volume file: "LFTV", three u32 extents (slowest first), then one u8 per voxel
// in row-major order. Values map to [0, 1] by dividing by 255.
namespace lift::signals {

SignalGrid load_volume(const std::string& path);
void save_volume(const std::string& path, const Tensor& values);  // [N1, N2, N3, 1]

}  // namespace lift::signals
