#include "analysis/metrics.hpp"

#include <cmath>
#include <limits>

#include "common/error.hpp"

namespace lift::analysis {

namespace {

void same_shape(const Tensor& a, const Tensor& b, const char* what) {
  require(a.shape() == b.shape(), ErrorKind::Dimension,
          std::string(what) + " shape mismatch: " + ndgrad::shape_str(a.shape()) + " vs " +
              ndgrad::shape_str(b.shape()));
}

}  // namespace

double mse(const Tensor& pred, const Tensor& target) {
  same_shape(pred, target, "mse");
  const auto a = pred.data(), b = target.data();
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

double psnr_from_mse(double m, double peak) {
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(m / (peak * peak));
}

double psnr(const Tensor& pred, const Tensor& target, double peak) {
  same_shape(pred, target, "psnr");
  return psnr_from_mse(mse(pred, target), peak);
}

double iou(const Tensor& pred, const Tensor& target, double threshold) {
  same_shape(pred, target, "iou");
  const auto a = pred.data(), b = target.data();
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a[i] >= threshold, y = b[i] >= threshold;
    inter += x && y;
    uni += x || y;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double ssim(const Tensor& pred, const Tensor& target, double peak) {
  same_shape(pred, target, "ssim");
  require(pred.rank() == 3, ErrorKind::Dimension, "ssim needs [H, W, C] images");
  const std::size_t H = pred.dim(0), W = pred.dim(1), C = pred.dim(2);
  constexpr std::size_t kWin = 8;
  require(H >= kWin && W >= kWin, ErrorKind::Dimension, "ssim needs images of at least 8x8");
  const double c1 = (0.01 * peak) * (0.01 * peak), c2 = (0.03 * peak) * (0.03 * peak);
  const auto a = pred.data(), b = target.data();
  const double n = kWin * kWin;
  double total = 0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t i = 0; i + kWin <= H; ++i) {
      for (std::size_t j = 0; j + kWin <= W; ++j) {
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        for (std::size_t u = 0; u < kWin; ++u) {
          for (std::size_t v = 0; v < kWin; ++v) {
            const std::size_t at = ((i + u) * W + (j + v)) * C + c;
            sa += a[at];
            sb += b[at];
            saa += a[at] * a[at];
            sbb += b[at] * b[at];
            sab += a[at] * b[at];
          }
        }
        const double ma = sa / n, mb = sb / n;
        const double va = saa / n - ma * ma, vb = sbb / n - mb * mb, cov = sab / n - ma * mb;
        total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace lift::analysis
