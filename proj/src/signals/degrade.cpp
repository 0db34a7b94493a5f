#include "signals/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace lift::signals {

Degradation Degradation::inpaint(double fraction, std::uint64_t seed) {
  Degradation d;
  d.kind = Kind::InpaintMask;
  d.fraction = fraction;
  d.seed = seed;
  return d;
}

Degradation Degradation::downsample(std::size_t factor) {
  Degradation d;
  d.kind = Kind::Downsample;
  d.factor = factor;
  return d;
}

Degradation Degradation::photon(double tau, double readout, std::uint64_t seed) {
  Degradation d;
  d.kind = Kind::PhotonNoise;
  d.tau = tau;
  d.readout = readout;
  d.seed = seed;
  return d;
}

void Degradation::validate() const {
  switch (kind) {
    case Kind::InpaintMask:
      require(fraction > 0 && fraction < 1, ErrorKind::Config, "inpainting fraction must lie in (0, 1)");
      break;
    case Kind::Downsample:
      require(factor >= 2, ErrorKind::Config, "downsampling factor must be an integer >= 2");
      break;
    case Kind::PhotonNoise:
      require(tau > 0, ErrorKind::Config, "photon count tau must be > 0");
      require(readout >= 0, ErrorKind::Config, "readout count must be >= 0");
      break;
  }
}

std::string Degradation::describe() const {
  std::ostringstream s;
  switch (kind) {
    case Kind::InpaintMask: s << "inpaint fraction=" << fraction << " seed=" << seed; break;
    case Kind::Downsample: s << "downsample factor=" << factor; break;
    case Kind::PhotonNoise: s << "photon tau=" << tau << " readout=" << readout << " seed=" << seed; break;
  }
  return s.str();
}

Tensor box_downsample(const Tensor& values, std::size_t factor) {
  const Shape& s = values.shape();
  const std::size_t D = s.size() - 1, C = s.back();
  Shape out_shape = s;
  for (std::size_t d = 0; d < D; ++d) {
    require(s[d] % factor == 0, ErrorKind::Config,
            "downsampling factor " + std::to_string(factor) + " does not divide grid extent " + std::to_string(s[d]));
    out_shape[d] = s[d] / factor;
  }
  std::vector<double> out(ndgrad::numel_of(out_shape), 0.0);
  const std::size_t n = values.numel() / C;
  const auto in = values.data();
  std::vector<std::size_t> idx(D, 0);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t q = 0;
    for (std::size_t d = 0; d < D; ++d) q = q * out_shape[d] + idx[d] / factor;
    for (std::size_t c = 0; c < C; ++c) out[q * C + c] += in[p * C + c];
    for (std::size_t d = D; d-- > 0;) {
      if (++idx[d] < s[d]) break;
      idx[d] = 0;
    }
  }
  const double norm = std::pow(static_cast<double>(factor), static_cast<double>(D));
  for (auto& v : out) v /= norm;
  return Tensor(out_shape, std::move(out));
}

namespace {

Tensor rows_at(const Tensor& rows, const std::vector<std::size_t>& index) {
  const std::size_t width = rows.shape().back();
  std::vector<double> out(index.size() * width);
  for (std::size_t i = 0; i < index.size(); ++i) {
    std::copy_n(rows.data().begin() + index[i] * width, width, out.begin() + i * width);
  }
  return Tensor({index.size(), width}, std::move(out));
}

}  // namespace

Degraded degrade(const SignalGrid& signal, const Degradation& d) {
  d.validate();
  Degraded out;
  out.eval_target = signal;
  const Shape grid = signal.shape();
  const std::size_t n = signal.points(), C = signal.channels(), D = signal.dims();
  const Tensor coords = signal.coords();
  const Tensor rows = as_rows(signal.values);
  switch (d.kind) {
    case Degradation::Kind::InpaintMask: {
      const auto withheld = static_cast<std::size_t>(std::ceil(d.fraction * static_cast<double>(n)));
      require(withheld < n, ErrorKind::Config, "inpainting would withhold every grid point");
      Rng rng = Rng(d.seed).split("inpaint-mask");
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = 0; i < withheld; ++i) std::swap(order[i], order[i + rng.index(n - i)]);
      out.withheld.assign(order.begin(), order.begin() + withheld);
      std::sort(out.withheld.begin(), out.withheld.end());
      std::vector<char> hidden(n, 0);
      for (auto i : out.withheld) hidden[i] = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (!hidden[i]) out.train.kept.push_back(i);
      }
      out.train.coords = rows_at(coords, out.train.kept);
      out.train.values = rows_at(rows, out.train.kept);
      break;
    }
    case Degradation::Kind::Downsample: {
      Tensor low = box_downsample(signal.values, d.factor);
      out.train.grid = Shape(low.shape().begin(), low.shape().end() - 1);
      out.train.values = as_rows(low);
      // Each coarse sample sits at the centre of the fine block it averages.
      const std::size_t m = ndgrad::numel_of(out.train.grid);
      std::vector<double> c(m * D);
      std::vector<std::size_t> idx(D, 0);
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t a = 0; a < D; ++a) {
          const double centre = static_cast<double>(idx[a] * d.factor) + (static_cast<double>(d.factor) - 1) / 2;
          c[p * D + a] = signal.lo + (signal.hi - signal.lo) * centre / static_cast<double>(grid[a] - 1);
        }
        for (std::size_t a = D; a-- > 0;) {
          if (++idx[a] < out.train.grid[a]) break;
          idx[a] = 0;
        }
      }
      out.train.coords = Tensor({m, D}, std::move(c));
      break;
    }
    case Degradation::Kind::PhotonNoise: {
      Rng rng = Rng(d.seed).split("photon-noise");
      std::vector<double> noisy(n * C);
      const auto clean = rows.data();
      for (std::size_t i = 0; i < n * C; ++i) {
        const double photons = static_cast<double>(rng.poisson(d.tau * std::max(clean[i], 0.0)));
        const double read = d.readout > 0 ? static_cast<double>(rng.poisson(d.readout)) : 0.0;
        noisy[i] = std::clamp((photons + read) / d.tau, 0.0, 1.0);
      }
      out.train.grid = grid;
      out.train.coords = coords;
      out.train.values = Tensor({n, C}, std::move(noisy));
      out.train.kept.resize(n);
      std::iota(out.train.kept.begin(), out.train.kept.end(), std::size_t{0});
      break;
    }
  }
  return out;
}

}  // namespace lift::signals
