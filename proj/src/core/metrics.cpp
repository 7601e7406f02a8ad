#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace natle {
namespace {

// Separable Gaussian filter with replicate padding.
PlanarImage gaussian_blur(const PlanarImage& src, const std::vector<double>& kernel, int radius) {
  const int w = src.width(), h = src.height();
  PlanarImage tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[static_cast<std::size_t>(k + radius)] * src.at(std::clamp(x + k, 0, w - 1), y);
      tmp.at(x, y) = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[static_cast<std::size_t>(k + radius)] * tmp.at(x, std::clamp(y + k, 0, h - 1));
      out.at(x, y) = acc;
    }
  return out;
}

PlanarImage product(const PlanarImage& a, const PlanarImage& b) {
  PlanarImage out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

double ssim(const PlanarImage& a, const PlanarImage& b, const SsimConfig& cfg) {
  if (!a.same_shape(b)) throw Error(ErrorCode::dimension_mismatch, "ssim: image sizes differ");
  if (a.empty()) throw Error(ErrorCode::invalid_argument, "ssim: empty images");
  if (cfg.window_radius < 1 || !(cfg.sigma > 0.0) || !(cfg.k1 > 0.0) || !(cfg.k2 > 0.0) ||
      !(cfg.dynamic_range > 0.0))
    throw Error(ErrorCode::invalid_argument, "ssim: constants must be positive");

  const int radius = cfg.window_radius;
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-(k * k) / (2.0 * cfg.sigma * cfg.sigma));
    kernel[static_cast<std::size_t>(k + radius)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;

  const double c1 = (cfg.k1 * cfg.dynamic_range) * (cfg.k1 * cfg.dynamic_range);
  const double c2 = (cfg.k2 * cfg.dynamic_range) * (cfg.k2 * cfg.dynamic_range);

  const PlanarImage mu_a = gaussian_blur(a, kernel, radius);
  const PlanarImage mu_b = gaussian_blur(b, kernel, radius);
  const PlanarImage e_aa = gaussian_blur(product(a, a), kernel, radius);
  const PlanarImage e_bb = gaussian_blur(product(b, b), kernel, radius);
  const PlanarImage e_ab = gaussian_blur(product(a, b), kernel, radius);

  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    const double den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
    sum += num / den;
  }
  return sum / static_cast<double>(a.size());
}

double ssim(const RgbImage& a, const RgbImage& b, const SsimConfig& cfg) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error(ErrorCode::dimension_mismatch, "ssim: image sizes differ");
  return ssim(init_illumination(a), init_illumination(b), cfg);
}

PsnrResult psnr(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error(ErrorCode::dimension_mismatch, "psnr: image sizes differ");
  if (a.r.empty()) throw Error(ErrorCode::invalid_argument, "psnr: empty images");
  double sq = 0.0;
  for (const auto& [pa, pb] : {std::pair{&a.r, &b.r}, std::pair{&a.g, &b.g}, std::pair{&a.b, &b.b}})
    for (std::size_t i = 0; i < pa->size(); ++i) {
      const double d = (*pa)[i] - (*pb)[i];
      sq += d * d;
    }
  const double mse = sq / (3.0 * static_cast<double>(a.r.size()));
  if (mse == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {10.0 * std::log10(1.0 / mse), false};
}

}  // namespace natle
