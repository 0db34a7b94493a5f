#include "ndgrad/serialize.hpp"

#include <fstream>

#include "common/binio.hpp"
#include "common/error.hpp"

namespace lift::ndgrad {

void write_tensor(std::ostream& out, const Tensor& t) {
  binio::write_magic(out, "LFT1");
  binio::write_u32(out, static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) binio::write_u64(out, d);
  for (double v : t.data()) binio::write_f64(out, v);
}

Tensor read_tensor(std::istream& in) {
  binio::expect_magic(in, "LFT1");
  const auto rank = binio::read_u32(in);
  require(rank <= 16, ErrorKind::Parse, "implausible tensor rank " + std::to_string(rank));
  Shape shape(rank);
  for (auto& d : shape) {
    d = binio::read_u64(in);
    require(d > 0 && d < (1ULL << 40), ErrorKind::Parse, "implausible tensor dimension " + std::to_string(d));
  }
  std::vector<double> data(numel_of(shape));
  for (auto& v : data) v = binio::read_f64(in);
  return Tensor(std::move(shape), std::move(data));
}

void save_tensor(const std::string& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path + " for writing");
  write_tensor(out, t);
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + path);
}

Tensor load_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path);
  return read_tensor(in);
}

}  // namespace lift::ndgrad
