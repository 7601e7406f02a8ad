#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace natle {

/// Single-channel H x W map stored row-major. Holds every scalar role in the
/// pipeline: luminance, illumination, reflectance, HSV planes, filter outputs.
class PlanarImage {
public:
  PlanarImage() = default;
  PlanarImage(int width, int height, double fill = 0.0);
  PlanarImage(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int x, int y) noexcept { return data_[index(x, y)]; }
  double at(int x, int y) const noexcept { return data_[index(x, y)]; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const PlanarImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const PlanarImage&) const = default;

private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

struct RgbImage {
  PlanarImage r;
  PlanarImage g;
  PlanarImage b;

  RgbImage() = default;
  RgbImage(int width, int height);
  RgbImage(PlanarImage red, PlanarImage green, PlanarImage blue);

  int width() const noexcept { return r.width(); }
  int height() const noexcept { return r.height(); }

  bool operator==(const RgbImage&) const = default;
};

/// Hue is a normalized angle in [0,1); saturation and value are in [0,1].
struct HsvImage {
  PlanarImage h;
  PlanarImage s;
  PlanarImage v;

  int width() const noexcept { return v.width(); }
  int height() const noexcept { return v.height(); }
};

HsvImage rgb_to_hsv(const RgbImage& img);
RgbImage hsv_to_rgb(const HsvImage& img);

/// BT.601 luma: 0.299 R + 0.587 G + 0.114 B.
PlanarImage init_illumination(const RgbImage& img);

PlanarImage clamp(const PlanarImage& img, double lo, double hi);

}  // namespace natle
