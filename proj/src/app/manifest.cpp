#include "app/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <sstream>

#include "common/error.hpp"
#include "signals/image_io.hpp"

namespace lift::app {

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    fail(ErrorKind::Io, "SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  const auto bytes = signals::read_file(path);
  return sha256_hex(std::string(bytes.begin(), bytes.end()));
}

std::string sha256_csv_without(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line, kept;
  long drop = -1;
  bool first = true;
  while (std::getline(in, line)) {
    auto cells = split(line);
    if (first) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == column) drop = static_cast<long>(i);
      }
      first = false;
    }
    bool sep = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (static_cast<long>(i) == drop) continue;
      if (sep) kept += ',';
      kept += cells[i];
      sep = true;
    }
    kept += '\n';
  }
  return sha256_hex(kept);
}

Manifest::Manifest(std::string command, std::string config_text)
    : command_(std::move(command)), config_(std::move(config_text)) {}

void Manifest::add(const std::string& output_dir, const std::string& relative) {
  artifacts_.push_back({relative, sha256_file(output_dir + "/" + relative)});
}

void Manifest::add_csv_without(const std::string& output_dir, const std::string& relative, const std::string& column) {
  artifacts_.push_back({relative, sha256_csv_without(output_dir + "/" + relative, column)});
}

std::string Manifest::render() const {
  std::ostringstream out;
  out << "# command: " << command_ << "\n# config\n" << config_ << "\n# artifacts (sha256)\n";
  for (const auto& a : artifacts_) out << a.sha256 << "  " << a.path << '\n';
  return out.str();
}

void Manifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << render();
}

}  // namespace lift::app
