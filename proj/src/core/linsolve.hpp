#pragma once

#include <optional>
#include <vector>

#include "image.hpp"
#include "operators.hpp"

namespace natle {

enum class Preconditioner { none, jacobi };

struct SolveConfig {
  double rel_tolerance = 1e-6;
  int max_iterations = 2000;
  Preconditioner preconditioner = Preconditioner::jacobi;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

void validate(const SolveConfig& cfg);

/// Preconditioned conjugate gradients on an SPD stencil system.
///
/// Returns x with ||A x - b|| <= rel_tolerance * ||b|| measured on the true
/// residual. The iteration starts from `initial` when given, otherwise from b
/// itself, so an identity system returns b bit for bit without iterating.
/// Throws NotConvergedError carrying the achieved residual.
PlanarImage solve_spd(const SparseSystem& system, const PlanarImage& rhs, const SolveConfig& cfg,
                      SolveReport* report = nullptr,
                      const std::optional<PlanarImage>& initial = std::nullopt);

inline constexpr std::size_t kDenseOracleMaxOrder = 400;

/// Direct solve of a row-major dense system. Guarded to order <= 400.
std::vector<double> solve_dense_oracle(const std::vector<double>& matrix, std::size_t order,
                                       const std::vector<double>& rhs);

}  // namespace natle
