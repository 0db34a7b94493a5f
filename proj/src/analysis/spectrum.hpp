#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lift::analysis {

// sum_i x_i exp(-2 pi i f p_i) for frequency f in cycles per unit.
std::complex<double> dft_at(const std::vector<double>& samples, const std::vector<double>& positions, double freq);

// |X_k| for k = 0..N-1 of the standard DFT (direct O(N^2) evaluation).
std::vector<double> dft_spectrum(const std::vector<double>& x);
// | sum |x|^2 - (1/N) sum |X|^2 | using the full complex DFT.
double parseval_gap(const std::vector<double>& x);

// Bins k in [0, N/2] whose magnitude exceeds rel_threshold * max magnitude.
std::vector<std::size_t> support_bins(const std::vector<double>& x, double rel_threshold = 1e-6);

// |F_pred(f) - F_target(f)| / |F_target(f)| per probe. Probes where the target
// has (numerically) no energy are reported as NaN.
std::vector<double> relative_spectral_errors(const std::vector<double>& pred, const std::vector<double>& target,
                                             const std::vector<double>& positions, const std::vector<double>& probes);

struct SpectralTrace {
  std::vector<double> probes;                // cycles per unit
  std::vector<std::size_t> steps;            // strictly increasing
  std::vector<std::vector<double>> errors;   // errors[i][j]: step i, probe j

  void append(std::size_t step, std::vector<double> row);
  void write_csv(std::ostream& out) const;
};

}  // namespace lift::analysis
