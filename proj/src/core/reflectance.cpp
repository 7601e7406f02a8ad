#include "reflectance.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace natle {

void validate(const ReflectanceParams& p) {
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta))
    throw Error(ErrorCode::invalid_argument, "beta must be finite and non-negative");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
    throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  if (!(p.eps_g >= 0.0) || !std::isfinite(p.eps_g))
    throw Error(ErrorCode::invalid_argument, "eps_g must be non-negative");
  if (!(p.epsilon_div > 0.0) || !std::isfinite(p.epsilon_div))
    throw Error(ErrorCode::invalid_argument, "division epsilon must be positive");
  if (!(p.ratio_cap >= 1.0) || !std::isfinite(p.ratio_cap))
    throw Error(ErrorCode::invalid_argument, "ratio cap must be at least 1");
}

ReflectanceInit init_reflectance(const HsvImage& input, const PlanarImage& illumination,
                                 const ReflectanceParams& p, const DenoiseParams& dp,
                                 bool denoise) {
  validate(p);
  if (!input.v.same_shape(illumination))
    throw Error(ErrorCode::dimension_mismatch, "illumination does not match the input");

  const int w = illumination.width(), h = illumination.height();
  ReflectanceInit out;
  out.raw = PlanarImage(w, h);
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    double ratio = input.v[i] / (illumination[i] + p.epsilon_div);
    if (ratio > p.ratio_cap) {
      ratio = p.ratio_cap;
      out.ratio_capped = true;
    }
    out.raw[i] = ratio;
  }

  if (!denoise) {
    out.rhat = out.raw;
    out.hue = input.h;
    out.sat = input.s;
    return out;
  }

  PlanarImage overflow(w, h);
  HsvImage noisy{input.h, input.s, PlanarImage(w, h)};
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    overflow[i] = std::max(out.raw[i], 1.0);
    noisy.v[i] = out.raw[i] / overflow[i];
  }

  HsvImage clean = rgb_to_hsv(denoise_rgb(hsv_to_rgb(noisy), dp));
  out.rhat = std::move(clean.v);
  for (std::size_t i = 0; i < out.rhat.size(); ++i) out.rhat[i] *= overflow[i];
  out.hue = std::move(clean.h);
  out.sat = std::move(clean.s);
  return out;
}

GradientField compute_g(const PlanarImage& value, const ReflectanceParams& p) {
  GradientField g = gradient(value);
  auto shape = [&p](double d) { return std::abs(d) < p.eps_g ? 0.0 : p.lambda * d; };
  for (double& d : g.gh.values()) d = shape(d);
  for (double& d : g.gv.values()) d = shape(d);
  return g;
}

double reflectance_objective(const PlanarImage& R, const PlanarImage& rhat,
                             const GradientField& target, double beta) {
  const GradientField grad = gradient(R);
  double fidelity = 0.0, mismatch = 0.0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    const double d = R[i] - rhat[i];
    const double eh = grad.gh[i] - target.gh[i];
    const double ev = grad.gv[i] - target.gv[i];
    fidelity += d * d;
    mismatch += eh * eh + ev * ev;
  }
  return fidelity + beta * mismatch;
}

PlanarImage estimate_reflectance(const ReflectanceInit& init, const PlanarImage& value,
                                 const ReflectanceParams& p, const SolveConfig& cfg,
                                 SolveReport* report) {
  validate(p);
  if (!init.rhat.same_shape(value))
    throw Error(ErrorCode::dimension_mismatch, "reflectance init does not match the value channel");
  const int w = value.width(), h = value.height();

  const GradientField target = compute_g(value, p);
  const SmoothnessWeights unit{PlanarImage(w, h, 1.0), PlanarImage(w, h, 1.0)};
  const PlanarImage div = divergence_weighted(target, unit);
  PlanarImage rhs = init.rhat;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += p.beta * div[i];

  return solve_spd(assemble_reflectance_system(p.beta, w, h), rhs, cfg, report, init.rhat);
}

}  // namespace natle
