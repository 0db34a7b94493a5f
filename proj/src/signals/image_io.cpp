#include "signals/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>

#include "common/error.hpp"

namespace lift::signals {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::uint8_t> quantize_u8(const Tensor& values) {
  std::vector<std::uint8_t> out(values.numel());
  const auto d = values.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = std::clamp(d[i], 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  return out;
}

namespace {

struct PngSource {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t offset;
  char error[256];
};

void png_read_bytes(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->offset + n > src->size) png_error(png, "unexpected end of file");
  std::memcpy(out, src->data + src->offset, n);
  src->offset += n;
}

void png_on_error(png_structp png, png_const_charp msg) {
  auto* src = static_cast<PngSource*>(png_get_error_ptr(png));
  std::snprintf(src->error, sizeof(src->error), "%s", msg);
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

SignalGrid decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  PngSource src{bytes.data(), bytes.size(), 0, {0}};
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &src, png_on_error, png_on_warning);
  require(png != nullptr, ErrorKind::Io, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  png_uint_32 width = 0, height = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::Parse, name + ": corrupt PNG (" + src.error + ") at byte offset " + std::to_string(src.offset));
  }
  png_set_read_fn(png, &src, png_read_bytes);
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  if (png_get_channels(png, info) != 3) png_error(png, "unexpected channel count after conversion");
  pixels.resize(static_cast<std::size_t>(width) * height * 3);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::vector<double> values(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) values[i] = pixels[i] / 255.0;
  return SignalGrid::make(Tensor({height, width, 3}, std::move(values)), name);
}

// Netpbm header: magic, width, height, maxval separated by whitespace/comments.
SignalGrid decode_netpbm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  std::size_t pos = 2;
  const bool color = bytes[1] == '6';
  auto next_number = [&](const char* what) {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    std::size_t value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1u << 24) break;
      ++pos;
    }
    if (pos == start || value == 0 || value > 1u << 24) {
      fail(ErrorKind::Parse, name + ": bad netpbm " + what + " at byte offset " + std::to_string(start));
    }
    return value;
  };
  const std::size_t width = next_number("width");
  const std::size_t height = next_number("height");
  const std::size_t maxval = next_number("maxval");
  if (maxval > 65535) fail(ErrorKind::Parse, name + ": maxval above 65535 at byte offset " + std::to_string(pos));
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    fail(ErrorKind::Parse, name + ": missing separator before pixel data at byte offset " + std::to_string(pos));
  }
  ++pos;
  const std::size_t channels = color ? 3 : 1;
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  const std::size_t need = width * height * channels * sample_bytes;
  if (bytes.size() - pos < need) {
    fail(ErrorKind::Parse, name + ": truncated pixel data at byte offset " + std::to_string(bytes.size()) +
                               " (expected " + std::to_string(need) + " bytes from offset " + std::to_string(pos) + ")");
  }
  std::vector<double> values(width * height * 3);
  for (std::size_t p = 0; p < width * height; ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t s = p * channels + (color ? c : 0);
      const std::size_t at = pos + s * sample_bytes;
      const double raw = sample_bytes == 2 ? (bytes[at] << 8 | bytes[at + 1]) : bytes[at];
      values[p * 3 + c] = raw / static_cast<double>(maxval);
    }
  }
  return SignalGrid::make(Tensor({height, width, 3}, std::move(values)), name);
}

void write_netpbm(const std::string& path, const Tensor& values, std::size_t channels) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path + " for writing");
  out << (channels == 3 ? "P6" : "P5") << '\n' << values.dim(1) << ' ' << values.dim(0) << "\n255\n";
  const auto bytes = quantize_u8(values);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + path);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                    [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

}  // namespace

SignalGrid decode_image(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  static const std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) return decode_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) return decode_netpbm(bytes, name);
  fail(ErrorKind::Parse, name + ": unsupported image format at byte offset 0 (expected PNG or binary PPM/PGM)");
}

SignalGrid load_image(const std::string& path) { return decode_image(read_file(path), path); }

void save_image(const std::string& path, const Tensor& values) {
  require(values.rank() == 3 && (values.dim(2) == 1 || values.dim(2) == 3), ErrorKind::Dimension,
          "image values must be [H, W, 1] or [H, W, 3], got " + ndgrad::shape_str(values.shape()));
  const std::size_t channels = values.dim(2);
  if (ends_with(path, ".ppm") || ends_with(path, ".pgm")) {
    write_netpbm(path, values, channels);
    return;
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(values.dim(1));
  image.height = static_cast<png_uint_32>(values.dim(0));
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const auto bytes = quantize_u8(values);
  if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    fail(ErrorKind::Io, "cannot write PNG " + path + ": " + image.message);
  }
}

}  // namespace lift::signals
