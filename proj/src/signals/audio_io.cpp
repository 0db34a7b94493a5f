#include "signals/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/binio.hpp"
#include "common/error.hpp"
#include "signals/image_io.hpp"

namespace lift::signals {

namespace {

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return b[at] | b[at + 1] << 8 | b[at + 2] << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}
std::uint16_t le16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

}  // namespace

Audio decode_wav(const std::vector<std::uint8_t>& b, const std::string& name) {
  auto bad = [&](const std::string& what, std::size_t offset) {
    fail(ErrorKind::Parse, name + ": " + what + " at byte offset " + std::to_string(offset));
  };
  if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0) bad("missing RIFF header", 0);
  if (std::memcmp(b.data() + 8, "WAVE", 4) != 0) bad("not a WAVE file", 8);
  std::size_t pos = 12;
  bool have_fmt = false;
  std::uint32_t rate = 0;
  while (pos + 8 <= b.size()) {
    const std::size_t chunk = pos;
    const std::uint32_t size = le32(b, pos + 4);
    pos += 8;
    if (size > b.size() - pos) bad("chunk length runs past end of file", chunk);
    if (std::memcmp(b.data() + chunk, "fmt ", 4) == 0) {
      if (size < 16) bad("fmt chunk too short", chunk);
      const std::uint16_t format = le16(b, pos), channels = le16(b, pos + 2), bits = le16(b, pos + 14);
      rate = le32(b, pos + 4);
      if (format != 1) bad("unsupported audio format " + std::to_string(format) + " (need PCM)", pos);
      if (channels != 1) bad("unsupported channel count " + std::to_string(channels) + " (need mono)", pos + 2);
      if (bits != 16) bad("unsupported sample width " + std::to_string(bits) + " (need 16-bit)", pos + 14);
      have_fmt = true;
    } else if (std::memcmp(b.data() + chunk, "data", 4) == 0) {
      if (!have_fmt) bad("data chunk before fmt chunk", chunk);
      const std::size_t n = size / 2;
      if (n == 0) bad("empty data chunk", chunk);
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) {
        values[i] = static_cast<std::int16_t>(le16(b, pos + 2 * i)) / 32768.0;
      }
      return Audio{SignalGrid::make(Tensor({n, 1}, std::move(values)), name), rate};
    }
    pos += size + (size & 1);
  }
  bad("no data chunk found", pos);
  return {};
}

Audio load_audio(const std::string& path) { return decode_wav(read_file(path), path); }

void save_audio(const std::string& path, const Tensor& values, std::uint32_t sample_rate) {
  require(values.rank() == 2 && values.dim(1) == 1, ErrorKind::Dimension,
          "audio values must be [N, 1], got " + ndgrad::shape_str(values.shape()));
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path + " for writing");
  const std::uint32_t n = static_cast<std::uint32_t>(values.numel());
  auto u16 = [&](std::uint16_t v) {
    out.put(static_cast<char>(v & 0xff));
    out.put(static_cast<char>(v >> 8));
  };
  out.write("RIFF", 4);
  binio::write_u32(out, 36 + 2 * n);
  out.write("WAVEfmt ", 8);
  binio::write_u32(out, 16);
  u16(1);
  u16(1);
  binio::write_u32(out, sample_rate);
  binio::write_u32(out, sample_rate * 2);
  u16(2);
  u16(16);
  out.write("data", 4);
  binio::write_u32(out, 2 * n);
  for (double v : values.data()) {
    const long s = std::lround(std::clamp(v, -1.0, 1.0) * 32767.0);
    u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
  }
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + path);
}

}  // namespace lift::signals
