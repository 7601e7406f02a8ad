#include "operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace natle {

SparseSystem::SparseSystem(int width, int height)
    : width_(width), height_(height),
      diag_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 1.0),
      east_(diag_.size(), 0.0), south_(diag_.size(), 0.0) {}

double SparseSystem::entry(std::size_t row, std::size_t col) const {
  const std::size_t w = static_cast<std::size_t>(width_);
  if (row == col) return diag_[row];
  const std::size_t lo = std::min(row, col), hi = std::max(row, col);
  if (hi == lo + 1 && hi % w != 0) return east_[lo];
  if (hi == lo + w) return south_[lo];
  return 0.0;
}

void SparseSystem::add_edge(std::size_t i, std::size_t j, double weight) {
  const std::size_t w = static_cast<std::size_t>(width_);
  const std::size_t lo = std::min(i, j), hi = std::max(i, j);
  diag_[lo] += weight;
  diag_[hi] += weight;
  if (hi == lo + 1 && hi % w != 0)
    east_[lo] -= weight;
  else if (hi == lo + w)
    south_[lo] -= weight;
  else
    throw Error(ErrorCode::internal, "edge outside the 5-point stencil");
}

void SparseSystem::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t n = diag_.size();
  const std::size_t w = static_cast<std::size_t>(width_);
  y.resize(n);
  for (std::size_t row = 0; row < static_cast<std::size_t>(height_); ++row) {
    const std::size_t base = row * w;
    for (std::size_t col = 0; col < w; ++col) {
      const std::size_t i = base + col;
      double acc = diag_[i] * x[i];
      if (col + 1 < w) acc += east_[i] * x[i + 1];
      if (col > 0) acc += east_[i - 1] * x[i - 1];
      if (i + w < n) acc += south_[i] * x[i + w];
      if (i >= w) acc += south_[i - w] * x[i - w];
      y[i] = acc;
    }
  }
}

std::vector<double> SparseSystem::dense() const {
  const std::size_t n = order();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = entry(r, c);
  return out;
}

bool SparseSystem::is_identity() const noexcept {
  for (std::size_t i = 0; i < diag_.size(); ++i)
    if (diag_[i] != 1.0 || east_[i] != 0.0 || south_[i] != 0.0) return false;
  return true;
}

GradientField gradient(const PlanarImage& img) {
  const int w = img.width(), h = img.height();
  GradientField out{PlanarImage(w, h), PlanarImage(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) out.gh.at(x, y) = img.at(x + 1, y) - img.at(x, y);
      if (y + 1 < h) out.gv.at(x, y) = img.at(x, y + 1) - img.at(x, y);
    }
  }
  return out;
}

PlanarImage divergence_weighted(const GradientField& field, const SmoothnessWeights& w) {
  const PlanarImage& fh = field.gh;
  if (!fh.same_shape(field.gv) || !fh.same_shape(w.ah) || !fh.same_shape(w.av))
    throw Error(ErrorCode::dimension_mismatch, "gradient field and weights differ in size");
  const int width = fh.width(), height = fh.height();
  PlanarImage out(width, height);
  // Row (x,y) of D_h reads u(x+1,y) - u(x,y) and exists only for x < W-1, so
  // its transpose scatters -f to (x,y) and +f to (x+1,y).
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width) {
        const double f = w.ah.at(x, y) * fh.at(x, y);
        out.at(x, y) -= f;
        out.at(x + 1, y) += f;
      }
      if (y + 1 < height) {
        const double f = w.av.at(x, y) * field.gv.at(x, y);
        out.at(x, y) -= f;
        out.at(x, y + 1) += f;
      }
    }
  }
  return out;
}

namespace {

void check_weight(double a) {
  if (!std::isfinite(a))
    throw Error(ErrorCode::invalid_argument, "non-finite smoothness weight");
  if (a < 0.0)
    throw Error(ErrorCode::invalid_argument, "negative smoothness weight " + std::to_string(a));
}

}  // namespace

SparseSystem assemble_illumination_system(const SmoothnessWeights& w) {
  if (!w.ah.same_shape(w.av))
    throw Error(ErrorCode::dimension_mismatch, "weight maps differ in size");
  const int width = w.ah.width(), height = w.ah.height();
  SparseSystem sys(width, height);
  const auto W = static_cast<std::size_t>(width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * W + static_cast<std::size_t>(x);
      if (x + 1 < width) {
        check_weight(w.ah.at(x, y));
        sys.add_edge(i, i + 1, w.ah.at(x, y));
      }
      if (y + 1 < height) {
        check_weight(w.av.at(x, y));
        sys.add_edge(i, i + W, w.av.at(x, y));
      }
    }
  }
  return sys;
}

SparseSystem assemble_reflectance_system(double beta, int width, int height) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw Error(ErrorCode::invalid_argument, "beta must be finite and non-negative");
  SparseSystem sys(width, height);
  if (beta == 0.0) return sys;
  const auto W = static_cast<std::size_t>(width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * W + static_cast<std::size_t>(x);
      if (x + 1 < width) sys.add_edge(i, i + 1, beta);
      if (y + 1 < height) sys.add_edge(i, i + W, beta);
    }
  }
  return sys;
}

}  // namespace natle
