#pragma once

#include <vector>

#include "image.hpp"

namespace natle {

/// Forward differences with a replicate boundary: the last column of gh and
/// the last row of gv are zero.
struct GradientField {
  PlanarImage gh;
  PlanarImage gv;
};

/// Per-pixel non-negative weights on the horizontal and vertical differences.
struct SmoothnessWeights {
  PlanarImage ah;
  PlanarImage av;
};

/// Symmetric 5-point stencil matrix of order width*height.
///
/// Row i couples pixel i to its east neighbour through east_[i] and to its
/// south neighbour through south_[i]; the west and north couplings are read
/// from the neighbour's entries, which keeps the matrix symmetric by
/// construction.
class SparseSystem {
public:
  SparseSystem(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t order() const noexcept { return diag_.size(); }

  /// Entry (row, col) of the matrix. Zero outside the stencil.
  double entry(std::size_t row, std::size_t col) const;

  /// y = A x
  void apply(const std::vector<double>& x, std::vector<double>& y) const;

  /// Row-major dense copy, intended for small oracle checks.
  std::vector<double> dense() const;

  const std::vector<double>& diagonal() const noexcept { return diag_; }

  /// Adds the edge term w * (u_i - u_j)^2 to the quadratic form.
  void add_edge(std::size_t i, std::size_t j, double weight);

  bool is_identity() const noexcept;

private:
  int width_;
  int height_;
  std::vector<double> diag_;
  std::vector<double> east_;
  std::vector<double> south_;
};

GradientField gradient(const PlanarImage& img);

/// Sum over directions of D_d^T (w_d . field_d), i.e. the adjoint of the
/// forward-difference operator applied to the weighted field.
PlanarImage divergence_weighted(const GradientField& field, const SmoothnessWeights& w);

/// I + sum_d D_d^T Diag(a_d) D_d
SparseSystem assemble_illumination_system(const SmoothnessWeights& w);

/// I + beta * sum_d D_d^T D_d
SparseSystem assemble_reflectance_system(double beta, int width, int height);

}  // namespace natle
