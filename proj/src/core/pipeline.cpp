#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "errors.hpp"

namespace natle {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void validate(const NatleParams& p) {
  validate(p.illumination);
  validate(p.reflectance);
  validate(p.denoise);
  validate(p.solver);
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
    throw Error(ErrorCode::invalid_argument, "gamma must be positive");
}

std::string describe_warnings(std::uint32_t flags) {
  static const std::pair<Warning, const char*> names[] = {
      {warn_all_black, "all_black"},
      {warn_illumination_clamped, "illumination_clamped"},
      {warn_ratio_capped, "ratio_capped"},
      {warn_identity_illumination, "identity_illumination"},
      {warn_identity_reflectance, "identity_reflectance"},
      {warn_denoise_disabled, "denoise_disabled"},
  };
  std::string out;
  for (const auto& [bit, name] : names) {
    if (!(flags & bit)) continue;
    if (!out.empty()) out += ';';
    out += name;
  }
  return out;
}

PlanarImage gamma_correct(const PlanarImage& L, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "gamma must be positive");
  PlanarImage out = L;
  const double exponent = 1.0 / gamma;
  for (double& v : out.values()) v = std::pow(v, exponent);
  return out;
}

EnhancementResult enhance(const RgbImage& img, const NatleParams& p, bool retain_trace) {
  validate(p);
  if (img.width() == 0 || img.height() == 0)
    throw Error(ErrorCode::invalid_argument, "cannot enhance an empty image");

  const auto t_start = Clock::now();
  EnhancementResult result;
  EnhancementTrace& trace = result.trace;
  trace.retained = retain_trace;
  if (p.illumination.alpha == 0.0) trace.warnings |= warn_identity_illumination;
  if (p.reflectance.beta == 0.0) trace.warnings |= warn_identity_reflectance;
  if (!p.denoise_enabled) trace.warnings |= warn_denoise_disabled;

  // Steps 1-2: illumination.
  auto t = Clock::now();
  PlanarImage lhat = init_illumination(img);
  IlluminationEstimate illum = estimate_illumination(lhat, p.illumination, p.solver);
  trace.ms_illum = ms_since(t);
  trace.illumination_iterations = illum.solve.iterations;
  if (illum.clamped) trace.warnings |= warn_illumination_clamped;

  const bool all_black = std::all_of(lhat.values().begin(), lhat.values().end(),
                                     [](double v) { return v == 0.0; });
  if (all_black) {
    trace.warnings |= warn_all_black;
    result.output = RgbImage(img.width(), img.height());
    if (retain_trace) {
      const PlanarImage zeros(img.width(), img.height());
      trace.lhat = std::move(lhat);
      trace.illumination = std::move(illum.map);
      trace.noisy_rhat = trace.rhat = trace.reflectance = trace.enhanced_value = zeros;
      trace.hue = trace.saturation = zeros;
    }
    trace.ms_total = ms_since(t_start);
    return result;
  }

  // Step 3: reflectance initialization with the denoising round trip.
  t = Clock::now();
  const HsvImage hsv = rgb_to_hsv(img);
  ReflectanceInit init =
      init_reflectance(hsv, illum.map, p.reflectance, p.denoise, p.denoise_enabled);
  trace.ms_denoise = ms_since(t);
  if (init.ratio_capped) trace.warnings |= warn_ratio_capped;

  // Step 4: reflectance estimation against the input value channel.
  t = Clock::now();
  SolveReport refl_report;
  PlanarImage reflectance = estimate_reflectance(init, hsv.v, p.reflectance, p.solver, &refl_report);
  trace.ms_reflect = ms_since(t);
  trace.reflectance_iterations = refl_report.iterations;

  // Steps 5-6: gamma-corrected recombination.
  const PlanarImage lifted = gamma_correct(illum.map, p.gamma);
  PlanarImage enhanced(img.width(), img.height());
  for (std::size_t i = 0; i < enhanced.size(); ++i)
    enhanced[i] = std::clamp(reflectance[i] * lifted[i], 0.0, 1.0);
  result.output = hsv_to_rgb(HsvImage{init.hue, init.sat, enhanced});

  if (retain_trace) {
    trace.lhat = std::move(lhat);
    trace.illumination = std::move(illum.map);
    trace.noisy_rhat = std::move(init.raw);
    trace.rhat = std::move(init.rhat);
    trace.reflectance = std::move(reflectance);
    trace.enhanced_value = std::move(enhanced);
    trace.hue = std::move(init.hue);
    trace.saturation = std::move(init.sat);
  }
  trace.ms_total = ms_since(t_start);
  return result;
}

}  // namespace natle
