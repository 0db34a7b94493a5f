#include "common/binio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "common/error.hpp"

namespace lift::binio {
namespace {

template <typename T>
void put(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  const auto offset = in.tellg();
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) {
    fail(ErrorKind::Parse, "unexpected end of file at offset " + std::to_string(static_cast<long long>(offset)));
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_u8(std::ostream& out, std::uint8_t v) { put(out, v); }
void write_u32(std::ostream& out, std::uint32_t v) { put(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { put(out, v); }
void write_f64(std::ostream& out, double v) { put(out, v); }

void write_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint8_t read_u8(std::istream& in) { return get<std::uint8_t>(in); }
std::uint32_t read_u32(std::istream& in) { return get<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return get<std::uint64_t>(in); }
double read_f64(std::istream& in) { return get<double>(in); }

void expect_magic(std::istream& in, const char (&magic)[5]) {
  const auto offset = in.tellg();
  char got[4] = {0, 0, 0, 0};
  in.read(got, 4);
  if (!in || std::memcmp(got, magic, 4) != 0) {
    fail(ErrorKind::Parse, std::string("bad magic, expected \"") + magic + "\" at offset " +
                               std::to_string(static_cast<long long>(offset)));
  }
}

std::string read_string(std::istream& in) {
  const std::uint32_t n = read_u32(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) fail(ErrorKind::Parse, "truncated string");
  return s;
}

}  // namespace lift::binio
