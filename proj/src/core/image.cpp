#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace natle {

PlanarImage::PlanarImage(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0)
    throw Error(ErrorCode::invalid_argument, "negative image dimensions");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

PlanarImage::PlanarImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0)
    throw Error(ErrorCode::invalid_argument, "negative image dimensions");
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error(ErrorCode::invalid_argument,
                "data length " + std::to_string(data_.size()) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
}

RgbImage::RgbImage(int width, int height)
    : r(width, height), g(width, height), b(width, height) {}

RgbImage::RgbImage(PlanarImage red, PlanarImage green, PlanarImage blue)
    : r(std::move(red)), g(std::move(green)), b(std::move(blue)) {
  if (!r.same_shape(g) || !r.same_shape(b))
    throw Error(ErrorCode::dimension_mismatch, "RGB channels differ in size");
}

HsvImage rgb_to_hsv(const RgbImage& img) {
  const int w = img.width(), h = img.height();
  HsvImage out{PlanarImage(w, h), PlanarImage(w, h), PlanarImage(w, h)};
  for (std::size_t i = 0; i < img.r.size(); ++i) {
    const double r = img.r[i], g = img.g[i], b = img.b[i];
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;

    double hue = 0.0;
    if (delta > 0.0) {
      if (mx == r)
        hue = (g - b) / delta;
      else if (mx == g)
        hue = (b - r) / delta + 2.0;
      else
        hue = (r - g) / delta + 4.0;
      hue /= 6.0;
      if (hue < 0.0) hue += 1.0;
      if (hue >= 1.0) hue -= 1.0;
    }
    out.h[i] = hue;
    out.s[i] = mx > 0.0 ? delta / mx : 0.0;
    out.v[i] = mx;
  }
  return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
  if (!img.h.same_shape(img.s) || !img.h.same_shape(img.v))
    throw Error(ErrorCode::dimension_mismatch, "HSV channels differ in size");
  RgbImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.v.size(); ++i) {
    const double v = img.v[i], s = img.s[i];
    const double h6 = img.h[i] * 6.0;
    const double sector = std::floor(h6);
    const double f = h6 - sector;
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    int k = static_cast<int>(sector) % 6;
    if (k < 0) k += 6;
    double r = v, g = v, b = v;
    switch (k) {
      case 0: r = v; g = t; b = p; break;
      case 1: r = q; g = v; b = p; break;
      case 2: r = p; g = v; b = t; break;
      case 3: r = p; g = q; b = v; break;
      case 4: r = t; g = p; b = v; break;
      default: r = v; g = p; b = q; break;
    }
    out.r[i] = r;
    out.g[i] = g;
    out.b[i] = b;
  }
  return out;
}

PlanarImage init_illumination(const RgbImage& img) {
  PlanarImage out(img.width(), img.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = 0.299 * img.r[i] + 0.587 * img.g[i] + 0.114 * img.b[i];
  return out;
}

PlanarImage clamp(const PlanarImage& img, double lo, double hi) {
  PlanarImage out = img;
  for (double& v : out.values()) v = std::clamp(v, lo, hi);
  return out;
}

}  // namespace natle
