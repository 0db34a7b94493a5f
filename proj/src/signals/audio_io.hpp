#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signals/signal.hpp"

namespace lift::signals {

struct Audio {
  SignalGrid signal;  // [N, 1], values in [-1, 1]
  std::uint32_t sample_rate = 0;
};

// 16-bit PCM mono WAV. Samples are divided by 32768.
Audio load_audio(const std::string& path);
Audio decode_wav(const std::vector<std::uint8_t>& bytes, const std::string& name);
// Values are clamped to [-1, 1] and scaled by 32767.
void save_audio(const std::string& path, const Tensor& values, std::uint32_t sample_rate);

}  // namespace lift::signals
