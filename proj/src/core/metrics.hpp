#pragma once

#include "image.hpp"

namespace natle {

struct SsimConfig {
  int window_radius = 5;  // 11x11
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean SSIM over the BT.601 luminance of both images. Local statistics use
/// a normalized Gaussian window with replicate padding, and the map is
/// averaged over every pixel.
double ssim(const RgbImage& a, const RgbImage& b, const SsimConfig& cfg = {});
double ssim(const PlanarImage& a, const PlanarImage& b, const SsimConfig& cfg = {});

struct PsnrResult {
  double db = 0.0;
  bool identical = false;  // MSE == 0; db is +inf
};

/// 10 log10(1 / MSE) over all three channels.
PsnrResult psnr(const RgbImage& a, const RgbImage& b);

}  // namespace natle
