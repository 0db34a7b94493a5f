#include "signals/volume_io.hpp"

#include <fstream>

#include "common/binio.hpp"
#include "common/error.hpp"
#include "signals/image_io.hpp"

namespace lift::signals {

SignalGrid load_volume(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path);
  binio::expect_magic(in, "LFTV");
  std::size_t dims[3];
  for (auto& d : dims) {
    d = binio::read_u32(in);
    require(d >= 1 && d <= 4096, ErrorKind::Parse,
            path + ": bad volume extent " + std::to_string(d) + " at byte offset " +
                std::to_string(static_cast<long long>(in.tellg()) - 4));
  }
  const std::size_t n = dims[0] * dims[1] * dims[2];
  std::vector<char> raw(n);
  in.read(raw.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    fail(ErrorKind::Parse, path + ": truncated voxel payload at byte offset " + std::to_string(16 + in.gcount()));
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<unsigned char>(raw[i]) / 255.0;
  return SignalGrid::make(Tensor({dims[0], dims[1], dims[2], 1}, std::move(values)), path);
}

void save_volume(const std::string& path, const Tensor& values) {
  require(values.rank() == 4 && values.dim(3) == 1, ErrorKind::Dimension,
          "volume values must be [N1, N2, N3, 1], got " + ndgrad::shape_str(values.shape()));
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path + " for writing");
  binio::write_magic(out, "LFTV");
  for (std::size_t d = 0; d < 3; ++d) binio::write_u32(out, static_cast<std::uint32_t>(values.dim(d)));
  const auto bytes = quantize_u8(values);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + path);
}

}  // namespace lift::signals
