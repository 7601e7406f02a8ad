#include "illumination.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace natle {

void validate(const IlluminationParams& p) {
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha))
    throw Error(ErrorCode::invalid_argument, "alpha must be finite and non-negative");
  if (!(p.eps > 0.0) || !std::isfinite(p.eps))
    throw Error(ErrorCode::invalid_argument, "eps must be positive");
}

SmoothnessWeights smoothness_weights(const PlanarImage& lhat, const IlluminationParams& p) {
  validate(p);
  const GradientField grad = gradient(lhat);
  SmoothnessWeights w{PlanarImage(lhat.width(), lhat.height()),
                      PlanarImage(lhat.width(), lhat.height())};
  for (std::size_t i = 0; i < lhat.size(); ++i) {
    w.ah[i] = p.alpha / (std::abs(grad.gh[i]) + p.eps);
    w.av[i] = p.alpha / (std::abs(grad.gv[i]) + p.eps);
  }
  return w;
}

double illumination_objective(const PlanarImage& L, const PlanarImage& lhat,
                              const SmoothnessWeights& w) {
  const GradientField grad = gradient(L);
  double fidelity = 0.0, smooth = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const double d = L[i] - lhat[i];
    fidelity += d * d;
    smooth += w.ah[i] * grad.gh[i] * grad.gh[i] + w.av[i] * grad.gv[i] * grad.gv[i];
  }
  return fidelity + smooth;
}

PlanarImage solve_illumination(const PlanarImage& lhat, const IlluminationParams& p,
                               const SolveConfig& cfg, SolveReport* report) {
  const SparseSystem sys = assemble_illumination_system(smoothness_weights(lhat, p));
  return solve_spd(sys, lhat, cfg, report);
}

IlluminationEstimate estimate_illumination(const PlanarImage& lhat, const IlluminationParams& p,
                                           const SolveConfig& cfg) {
  IlluminationEstimate out;
  out.map = solve_illumination(lhat, p, cfg, &out.solve);
  for (double& v : out.map.values()) {
    const double c = std::clamp(v, p.eps, 1.0);
    if (c != v) out.clamped = true;
    v = c;
  }
  return out;
}

}  // namespace natle
