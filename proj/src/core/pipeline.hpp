#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denoise.hpp"
#include "illumination.hpp"
#include "image.hpp"
#include "linsolve.hpp"
#include "reflectance.hpp"

namespace natle {

struct NatleParams {
  IlluminationParams illumination;
  ReflectanceParams reflectance;
  DenoiseParams denoise;
  bool denoise_enabled = true;
  double gamma = 2.2;
  SolveConfig solver;
};

void validate(const NatleParams& p);

enum Warning : std::uint32_t {
  warn_none = 0,
  warn_all_black = 1u << 0,
  warn_illumination_clamped = 1u << 1,
  warn_ratio_capped = 1u << 2,
  warn_identity_illumination = 1u << 3,  // alpha == 0
  warn_identity_reflectance = 1u << 4,   // beta == 0
  warn_denoise_disabled = 1u << 5,
};

/// Names of the set bits, joined with ';'.
std::string describe_warnings(std::uint32_t flags);

struct EnhancementTrace {
  bool retained = false;
  PlanarImage lhat;
  PlanarImage illumination;
  PlanarImage noisy_rhat;
  PlanarImage rhat;
  PlanarImage reflectance;
  PlanarImage enhanced_value;
  PlanarImage hue;
  PlanarImage saturation;

  double ms_illum = 0.0;
  double ms_denoise = 0.0;
  double ms_reflect = 0.0;
  double ms_total = 0.0;
  int illumination_iterations = 0;
  int reflectance_iterations = 0;
  std::uint32_t warnings = warn_none;
};

struct EnhancementResult {
  RgbImage output;
  EnhancementTrace trace;
};

/// Per-pixel L^(1/gamma).
PlanarImage gamma_correct(const PlanarImage& L, double gamma);

/// Full enhancement: luminance init, illumination solve, reflectance init
/// with denoising, reflectance solve, S' = R . L^(1/gamma), recombination
/// with the denoised hue and saturation. Output is in [0,1].
EnhancementResult enhance(const RgbImage& img, const NatleParams& p, bool retain_trace = false);

}  // namespace natle
