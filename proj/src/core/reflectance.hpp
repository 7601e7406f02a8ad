#pragma once

#include "denoise.hpp"
#include "image.hpp"
#include "linsolve.hpp"
#include "operators.hpp"

namespace natle {

struct ReflectanceParams {
  double beta = 3.0;
  double lambda = 1.1;
  double eps_g = 0.02;
  double epsilon_div = 1e-3;
  // Upper bound on V / (L + eps) before denoising.
  double ratio_cap = 10.0;
};

void validate(const ReflectanceParams& p);

struct ReflectanceInit {
  PlanarImage rhat;       // denoised value-channel reflectance, may exceed 1
  PlanarImage hue;        // denoised hue, kept for recombination
  PlanarImage sat;        // denoised saturation, kept for recombination
  PlanarImage raw;        // V / (L + eps) after the cap, before denoising
  bool ratio_capped = false;
};

/// Divides the value channel by the illumination, then removes noise by a
/// round trip through RGB: the ratio is recombined with the input hue and
/// saturation, denoised per RGB channel and converted back. Ratios above 1
/// are scaled into range for the conversion and the scale is restored on the
/// returned value channel.
///
/// With `denoise` false the round trip is skipped: rhat is the capped ratio
/// and hue/saturation are the input's.
ReflectanceInit init_reflectance(const HsvImage& input, const PlanarImage& illumination,
                                 const ReflectanceParams& p, const DenoiseParams& dp,
                                 bool denoise = true);

/// Target gradients: zero where |grad_d S| < eps_g, lambda * grad_d S elsewhere.
GradientField compute_g(const PlanarImage& value, const ReflectanceParams& p);

/// ||R - rhat||^2 + beta * sum_d ||grad_d R - G_d||^2
double reflectance_objective(const PlanarImage& R, const PlanarImage& rhat,
                             const GradientField& target, double beta);

/// Minimizer of reflectance_objective, unclamped.
PlanarImage estimate_reflectance(const ReflectanceInit& init, const PlanarImage& value,
                                 const ReflectanceParams& p, const SolveConfig& cfg,
                                 SolveReport* report = nullptr);

}  // namespace natle
