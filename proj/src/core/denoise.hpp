#pragma once

#include "image.hpp"

namespace natle {

struct DenoiseParams {
  int median_radius = 1;
  double abf_spatial_sigma = 2.0;
  double abf_range_sigma_min = 0.03;
  double abf_range_sigma_max = 0.15;
  int abf_window_radius = 5;
  int noise_window_radius = 3;
};

void validate(const DenoiseParams& p);

/// Median over the (2r+1)^2 replicate-padded neighbourhood.
PlanarImage median_filter(const PlanarImage& ch, int radius);

/// Local noise level: standard deviation, over the (2r+1)^2 window, of the
/// residual between each pixel and its own local mean.
PlanarImage estimate_local_sigma(const PlanarImage& ch, int radius);

/// Bilateral filter with a fixed spatial Gaussian and a per-pixel range sigma
/// taken from sigma_map, clamped to [abf_range_sigma_min, abf_range_sigma_max].
/// The window is clipped at the image border.
PlanarImage adaptive_bilateral(const PlanarImage& ch, const PlanarImage& sigma_map,
                               const DenoiseParams& p);

/// Median then adaptive bilateral on each channel; each channel's range sigma
/// is estimated from its median-filtered plane.
RgbImage denoise_rgb(const RgbImage& img, const DenoiseParams& p);

}  // namespace natle
