#include "denoise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"

namespace natle {
namespace {

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// Replicate-padded box mean with a (2r+1)^2 window, done as two 1-D passes.
PlanarImage box_mean(const PlanarImage& src, int radius) {
  const int w = src.width(), h = src.height();
  const double norm = 1.0 / static_cast<double>((2 * radius + 1) * (2 * radius + 1));
  PlanarImage horiz(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += src.at(clamp_index(x + k, w), y);
      horiz.at(x, y) = acc;
    }
  PlanarImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += horiz.at(x, clamp_index(y + k, h));
      out.at(x, y) = acc * norm;
    }
  return out;
}

void check_radius(int radius, const char* what) {
  if (radius < 1) throw Error(ErrorCode::invalid_argument, std::string(what) + " must be >= 1");
}

}  // namespace

void validate(const DenoiseParams& p) {
  check_radius(p.median_radius, "median radius");
  check_radius(p.abf_window_radius, "bilateral window radius");
  check_radius(p.noise_window_radius, "noise window radius");
  if (!(p.abf_spatial_sigma > 0.0) || !std::isfinite(p.abf_spatial_sigma))
    throw Error(ErrorCode::invalid_argument, "bilateral spatial sigma must be positive");
  if (!(p.abf_range_sigma_min > 0.0) || !(p.abf_range_sigma_min <= p.abf_range_sigma_max) ||
      !std::isfinite(p.abf_range_sigma_max))
    throw Error(ErrorCode::invalid_argument, "bilateral range sigmas need 0 < min <= max");
}

PlanarImage median_filter(const PlanarImage& ch, int radius) {
  check_radius(radius, "median radius");
  const int w = ch.width(), h = ch.height();
  const int side = 2 * radius + 1;
  const std::size_t count = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  const auto mid = static_cast<std::ptrdiff_t>(count / 2);
  std::vector<double> window(count);
  PlanarImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::size_t n = 0;
      for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
          window[n++] = ch.at(clamp_index(x + dx, w), clamp_index(y + dy, h));
      std::nth_element(window.begin(), window.begin() + mid, window.end());
      out.at(x, y) = window[static_cast<std::size_t>(mid)];
    }
  return out;
}

PlanarImage estimate_local_sigma(const PlanarImage& ch, int radius) {
  check_radius(radius, "noise window radius");
  const PlanarImage mean = box_mean(ch, radius);
  PlanarImage residual(ch.width(), ch.height());
  PlanarImage residual_sq(ch.width(), ch.height());
  for (std::size_t i = 0; i < ch.size(); ++i) {
    residual[i] = ch[i] - mean[i];
    residual_sq[i] = residual[i] * residual[i];
  }
  const PlanarImage m1 = box_mean(residual, radius);
  const PlanarImage m2 = box_mean(residual_sq, radius);
  PlanarImage out(ch.width(), ch.height());
  for (std::size_t i = 0; i < ch.size(); ++i) out[i] = std::sqrt(std::max(0.0, m2[i] - m1[i] * m1[i]));
  return out;
}

PlanarImage adaptive_bilateral(const PlanarImage& ch, const PlanarImage& sigma_map,
                               const DenoiseParams& p) {
  validate(p);
  if (!ch.same_shape(sigma_map))
    throw Error(ErrorCode::dimension_mismatch, "sigma map does not match the channel");
  const int w = ch.width(), h = ch.height();
  const int rad = p.abf_window_radius;
  const int side = 2 * rad + 1;

  std::vector<double> spatial(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
  const double inv_two_ss = 1.0 / (2.0 * p.abf_spatial_sigma * p.abf_spatial_sigma);
  for (int dy = -rad; dy <= rad; ++dy)
    for (int dx = -rad; dx <= rad; ++dx)
      spatial[static_cast<std::size_t>((dy + rad) * side + (dx + rad))] =
          std::exp(-static_cast<double>(dx * dx + dy * dy) * inv_two_ss);

  PlanarImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - rad), y1 = std::min(h - 1, y + rad);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - rad), x1 = std::min(w - 1, x + rad);
      const double centre = ch.at(x, y);
      const double sr = std::clamp(sigma_map.at(x, y), p.abf_range_sigma_min, p.abf_range_sigma_max);
      const double inv_two_sr = 1.0 / (2.0 * sr * sr);
      double num = 0.0, den = 0.0;
      for (int qy = y0; qy <= y1; ++qy) {
        const int row = (qy - y + rad) * side + rad - x;
        for (int qx = x0; qx <= x1; ++qx) {
          const double v = ch.at(qx, qy);
          const double diff = v - centre;
          const double wt = spatial[static_cast<std::size_t>(row + qx)] * std::exp(-diff * diff * inv_two_sr);
          num += wt * v;
          den += wt;
        }
      }
      out.at(x, y) = num / den;
    }
  }
  return out;
}

RgbImage denoise_rgb(const RgbImage& img, const DenoiseParams& p) {
  validate(p);
  auto channel = [&p](const PlanarImage& ch) {
    const PlanarImage med = median_filter(ch, p.median_radius);
    return adaptive_bilateral(med, estimate_local_sigma(med, p.noise_window_radius), p);
  };
  return RgbImage(channel(img.r), channel(img.g), channel(img.b));
}

}  // namespace natle
