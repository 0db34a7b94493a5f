#pragma once

#include "ndgrad/tensor.hpp"

namespace lift::analysis {

using ndgrad::Tensor;

double mse(const Tensor& pred, const Tensor& target);
// -10 log10(mse / peak^2); +infinity when the inputs are identical.
double psnr(const Tensor& pred, const Tensor& target, double peak = 1.0);
double psnr_from_mse(double mse, double peak = 1.0);
// |A and B| / |A or B| after thresholding (value >= threshold is occupied).
// Two empty volumes give 1.
double iou(const Tensor& pred, const Tensor& target, double threshold = 0.5);
// Mean SSIM over all 8x8 windows (stride 1) and channels of [H, W, C] images,
// uniform window weights, K1 = 0.01, K2 = 0.03, dynamic range `peak`.
double ssim(const Tensor& pred, const Tensor& target, double peak = 1.0);

}  // namespace lift::analysis
