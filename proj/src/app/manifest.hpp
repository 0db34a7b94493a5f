#pragma once

#include <string>
#include <vector>

namespace lift::app {

struct ArtifactHash {
  std::string path;    // relative to the output directory
  std::string sha256;  // lowercase hex
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);
// Hash of a CSV with the named column removed from every row (used for
// training logs whose wall-clock column is not reproducible).
std::string sha256_csv_without(const std::string& path, const std::string& column);

// Config echo plus one line per artifact: "sha256  path".
class Manifest {
 public:
  Manifest(std::string command, std::string config_text);
  void add(const std::string& output_dir, const std::string& relative);
  void add_csv_without(const std::string& output_dir, const std::string& relative, const std::string& column);
  const std::vector<ArtifactHash>& artifacts() const { return artifacts_; }
  std::string render() const;
  void write(const std::string& path) const;

 private:
  std::string command_;
  std::string config_;
  std::vector<ArtifactHash> artifacts_;
};

}  // namespace lift::app
