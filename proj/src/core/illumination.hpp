#pragma once

#include "image.hpp"
#include "linsolve.hpp"
#include "operators.hpp"

namespace natle {

struct IlluminationParams {
  double alpha = 0.015;
  double eps = 1e-3;
};

void validate(const IlluminationParams& p);

/// a_d = alpha / (|grad_d lhat| + eps), computed from the fixed initial map.
SmoothnessWeights smoothness_weights(const PlanarImage& lhat, const IlluminationParams& p);

/// ||L - lhat||^2 + sum_x sum_d a_d(x) (grad_d L(x))^2
double illumination_objective(const PlanarImage& L, const PlanarImage& lhat,
                              const SmoothnessWeights& w);

/// Minimizer of illumination_objective, unclamped.
PlanarImage solve_illumination(const PlanarImage& lhat, const IlluminationParams& p,
                               const SolveConfig& cfg, SolveReport* report = nullptr);

struct IlluminationEstimate {
  PlanarImage map;       // clamped to [eps, 1]
  bool clamped = false;  // true when the clamp changed at least one pixel
  SolveReport solve;
};

IlluminationEstimate estimate_illumination(const PlanarImage& lhat, const IlluminationParams& p,
                                           const SolveConfig& cfg);

}  // namespace natle
