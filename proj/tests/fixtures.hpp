#pragma once

// Seeded synthetic images shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "image.hpp"

namespace natle::testing {

inline PlanarImage random_plane(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  PlanarImage out(w, h);
  for (double& v : out.values()) v = dist(rng);
  return out;
}

inline RgbImage random_rgb(int w, int h, std::uint64_t seed) {
  return RgbImage(random_plane(w, h, seed), random_plane(w, h, seed + 1), random_plane(w, h, seed + 2));
}

inline RgbImage constant_rgb(int w, int h, double r, double g, double b) {
  return RgbImage(PlanarImage(w, h, r), PlanarImage(w, h, g), PlanarImage(w, h, b));
}

/// Smooth value noise: random lattice values every `cell` pixels,
/// interpolated with a smoothstep.
inline PlanarImage value_noise(int w, int h, int cell, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int gw = w / cell + 2, gh = h / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(gw * gh));
  for (double& v : lattice) v = u(rng);
  auto at = [&](int gx, int gy) { return lattice[static_cast<std::size_t>(gy * gw + gx)]; };
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  PlanarImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int gx = x / cell, gy = y / cell;
      const double tx = smooth((x % cell) / static_cast<double>(cell));
      const double ty = smooth((y % cell) / static_cast<double>(cell));
      const double top = at(gx, gy) * (1 - tx) + at(gx + 1, gy) * tx;
      const double bottom = at(gx, gy + 1) * (1 - tx) + at(gx + 1, gy + 1) * tx;
      out.at(x, y) = top * (1 - ty) + bottom * ty;
    }
  return out;
}

/// Octaves of value noise with amplitude proportional to the cell size,
/// giving the roughly 1/f spectrum of natural images.
inline PlanarImage fractal_noise(int w, int h, double amplitude, std::mt19937_64& rng) {
  PlanarImage out(w, h);
  for (int cell = 32; cell >= 2; cell /= 2) {
    const PlanarImage octave = value_noise(w, h, cell, rng);
    const double a = amplitude * cell / 32.0;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * octave[i];
  }
  return out;
}

/// Grey mosaic of square tiles with uniform random intensities.
inline RgbImage tile_mosaic(int w, int h, int tile, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  const int tw = w / tile + 1, th = h / tile + 1;
  std::vector<double> level(static_cast<std::size_t>(tw * th));
  for (double& v : level) v = u(rng);
  PlanarImage p(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) p.at(x, y) = level[static_cast<std::size_t>((y / tile) * tw + x / tile)];
  return RgbImage(p, p, p);
}

/// Procedural well-lit scene: a sky gradient, a ground plane with fractal
/// texture, and a few coloured objects with hard edges, shading and their
/// own texture. Deterministic for a given seed.
inline RgbImage synthetic_scene(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RgbImage img(w, h);

  const PlanarImage ground_tex = fractal_noise(w, h, 0.12, rng);
  const PlanarImage object_tex = fractal_noise(w, h, 0.06, rng);
  const double horizon = h * (0.35 + 0.15 * u(rng));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double r, g, b;
      if (y < horizon) {
        const double t = y / std::max(1.0, horizon);
        r = 0.45 + 0.25 * t;
        g = 0.6 + 0.2 * t;
        b = 0.85 - 0.1 * t;
      } else {
        const double tex = ground_tex.at(x, y);
        const double shade = 0.75 - 0.25 * (y - horizon) / std::max(1.0, h - horizon);
        r = (0.35 + tex) * shade + 0.1;
        g = (0.55 + tex) * shade + 0.05;
        b = (0.25 + 0.5 * tex) * shade;
      }
      img.r.at(x, y) = r;
      img.g.at(x, y) = g;
      img.b.at(x, y) = b;
    }

  const int objects = 4;
  for (int k = 0; k < objects; ++k) {
    const double cx = w * u(rng), cy = h * (0.3 + 0.6 * u(rng));
    const double rx = w * (0.08 + 0.12 * u(rng)), ry = h * (0.08 + 0.12 * u(rng));
    const double cr = 0.15 + 0.7 * u(rng), cg = 0.15 + 0.7 * u(rng), cb = 0.15 + 0.7 * u(rng);
    const bool ellipse = k % 2 == 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry;
        const bool inside = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
        if (!inside) continue;
        const double shade = 0.8 + 0.2 * (1.0 - std::min(1.0, dx * dx + dy * dy)) + object_tex.at(x, y);
        img.r.at(x, y) = cr * shade;
        img.g.at(x, y) = cg * shade;
        img.b.at(x, y) = cb * shade;
      }
  }
  for (PlanarImage* p : {&img.r, &img.g, &img.b})
    for (double& v : p->values()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

inline double quantize8(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

/// Simulated under-exposed capture of `scene`: exposure scaling with a mild
/// tone curve, signal-dependent and read noise, 8-bit quantization.
inline RgbImage darken(const RgbImage& scene, double exposure, double read_noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  RgbImage out(scene.width(), scene.height());
  const PlanarImage* src[] = {&scene.r, &scene.g, &scene.b};
  PlanarImage* dst[] = {&out.r, &out.g, &out.b};
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < src[c]->size(); ++i) {
      const double clean = exposure * std::pow((*src[c])[i], 1.2);
      const double shot = std::sqrt(std::max(clean, 0.0) * 0.002);
      (*dst[c])[i] = quantize8(clean + (shot + read_noise) * n(rng));
    }
  return out;
}

inline RgbImage add_gaussian_noise(const RgbImage& img, double sigma, std::uint64_t seed, bool clip = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  RgbImage out = img;
  for (PlanarImage* p : {&out.r, &out.g, &out.b})
    for (double& v : p->values()) {
      v += n(rng);
      if (clip) v = std::clamp(v, 0.0, 1.0);
    }
  return out;
}

/// Replaces `fraction` of the pixels with pure black or white in every channel.
inline RgbImage salt_and_pepper(const RgbImage& img, double fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RgbImage out = img;
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    if (u(rng) >= fraction) continue;
    const double v = u(rng) < 0.5 ? 0.0 : 1.0;
    out.r[i] = out.g[i] = out.b[i] = v;
  }
  return out;
}

inline double mean_abs_diff(const PlanarImage& a, const PlanarImage& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

inline double mean_abs_diff(const RgbImage& a, const RgbImage& b) {
  return (mean_abs_diff(a.r, b.r) + mean_abs_diff(a.g, b.g) + mean_abs_diff(a.b, b.b)) / 3.0;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double mean(const PlanarImage& p) {
  double s = 0.0;
  for (double v : p.values()) s += v;
  return s / static_cast<double>(p.size());
}

inline bool all_finite(const PlanarImage& p) {
  return std::all_of(p.values().begin(), p.values().end(), [](double v) { return std::isfinite(v); });
}

inline double total_variation(const PlanarImage& p) {
  double tv = 0.0;
  for (int y = 0; y < p.height(); ++y)
    for (int x = 0; x < p.width(); ++x) {
      if (x + 1 < p.width()) tv += std::abs(p.at(x + 1, y) - p.at(x, y));
      if (y + 1 < p.height()) tv += std::abs(p.at(x, y + 1) - p.at(x, y));
    }
  return tv;
}

}  // namespace natle::testing
