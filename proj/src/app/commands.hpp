#pragma once

#include <string>
#include <utility>
#include <vector>

#include "app/config.hpp"
#include "common/error.hpp"
#include "meta/records.hpp"
#include "signals/signal.hpp"

namespace lift::app {

struct CommandOutput {
  std::vector<std::string> artifacts;  // paths relative to the output directory
  std::vector<std::pair<std::string, double>> metrics;
  std::string manifest;  // path of manifest.txt

  double metric(const std::string& name) const;  // NaN when absent
};

// fit, meta, modulate, query, interp, spectra, compare. Every command writes
// manifest.txt into config.output_dir. Throws lift::Error.
CommandOutput run_command(const std::string& command, const RunConfig& config);
std::vector<std::string> command_names();

// 0 success, 2 configuration error, 3 runtime or numeric failure.
int exit_code_for(ErrorKind kind);

// Input resolution shared with the C API. "synthetic:test[:size]",
// "synthetic:blob[:size]", "synthetic:spectral[:n]", "synthetic:sphere[:n]"
// or a file path.
signals::SignalGrid load_signal(const RunConfig& config);
// A directory of signal files (sorted by name) or "synthetic:blobs:<count>:<size>".
// All signals must share one shape; offenders are listed otherwise.
std::vector<meta::NamedSignal> load_dataset(const RunConfig& config);

}  // namespace lift::app
