#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signals/signal.hpp"

namespace lift::signals {

// PNG (any bit depth/colour type, reduced to 8-bit RGB) or binary PPM/PGM,
// chosen by file signature. Values are scaled to [0, 1]; result is [H, W, 3].
SignalGrid load_image(const std::string& path);
SignalGrid decode_image(const std::vector<std::uint8_t>& bytes, const std::string& name);

// Writes [H, W, 1] or [H, W, 3] values (clamped to [0, 1], rounded to 8 bits).
// ".ppm"/".pgm" select the netpbm writer, anything else writes PNG.
void save_image(const std::string& path, const Tensor& values);

std::vector<std::uint8_t> quantize_u8(const Tensor& values);
std::vector<std::uint8_t> read_file(const std::string& path);

}  // namespace lift::signals
