#include "linsolve.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "errors.hpp"

namespace natle {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double true_residual(const SparseSystem& A, const std::vector<double>& x,
                     const std::vector<double>& b, std::vector<double>& r) {
  A.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return std::sqrt(dot(r, r));
}

}  // namespace

void validate(const SolveConfig& cfg) {
  if (!(cfg.rel_tolerance > 0.0))
    throw Error(ErrorCode::invalid_argument, "solver tolerance must be positive");
  if (cfg.max_iterations < 1)
    throw Error(ErrorCode::invalid_argument, "max_iterations must be at least 1");
}

PlanarImage solve_spd(const SparseSystem& system, const PlanarImage& rhs, const SolveConfig& cfg,
                      SolveReport* report, const std::optional<PlanarImage>& initial) {
  validate(cfg);
  if (rhs.width() != system.width() || rhs.height() != system.height())
    throw Error(ErrorCode::dimension_mismatch, "right-hand side does not match system order");
  if (initial && !initial->same_shape(rhs))
    throw Error(ErrorCode::dimension_mismatch, "initial guess does not match system order");

  const std::size_t n = system.order();
  std::vector<double> b(rhs.values().begin(), rhs.values().end());
  for (double v : b)
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite right-hand side");

  const double b_norm = std::sqrt(dot(b, b));
  SolveReport local;
  if (b_norm == 0.0) {
    if (report) *report = local;
    return PlanarImage(rhs.width(), rhs.height(), 0.0);
  }
  const double target = cfg.rel_tolerance * b_norm;

  std::vector<double> x = initial ? std::vector<double>(initial->values().begin(), initial->values().end())
                                  : b;
  std::vector<double> r(n), z(n), p(n), q(n);
  std::vector<double> inv_diag(n, 1.0);
  if (cfg.preconditioner == Preconditioner::jacobi)
    for (std::size_t i = 0; i < n; ++i) inv_diag[i] = 1.0 / system.diagonal()[i];

  double r_norm = true_residual(system, x, b, r);
  int it = 0;
  while (r_norm > target && it < cfg.max_iterations) {
    // (Re)start from the current true residual.
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    while (it < cfg.max_iterations) {
      system.apply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) break;
      const double step = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += step * p[i];
        r[i] -= step * q[i];
      }
      ++it;
      if (std::sqrt(dot(r, r)) <= target) break;
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
      const double rz_next = dot(r, z);
      const double ratio = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + ratio * p[i];
    }
    const double recursive = std::sqrt(dot(r, r));
    r_norm = true_residual(system, x, b, r);
    // Recursive and true residuals agreeing but stuck above target means
    // the system is too ill-conditioned for the requested tolerance.
    if (r_norm > target && recursive <= target && r_norm <= recursive * (1.0 + 1e-12)) break;
  }

  local.iterations = it;
  local.relative_residual = r_norm / b_norm;
  if (report) *report = local;
  if (r_norm > target)
    throw NotConvergedError("solver stopped after " + std::to_string(it) +
                                " iterations at relative residual " +
                                std::to_string(local.relative_residual),
                            local.relative_residual, it);
  return PlanarImage(rhs.width(), rhs.height(), std::move(x));
}

std::vector<double> solve_dense_oracle(const std::vector<double>& matrix, std::size_t order,
                                       const std::vector<double>& rhs) {
  if (order > kDenseOracleMaxOrder)
    throw Error(ErrorCode::invalid_argument,
                "dense oracle limited to order " + std::to_string(kDenseOracleMaxOrder));
  if (matrix.size() != order * order || rhs.size() != order)
    throw Error(ErrorCode::dimension_mismatch, "dense system has inconsistent sizes");

  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) A(r, c) = matrix[static_cast<std::size_t>(r) * order + static_cast<std::size_t>(c)];
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw Error(ErrorCode::invalid_argument, "dense system is singular");
  const Eigen::VectorXd x = lu.solve(b);
  return {x.data(), x.data() + x.size()};
}

}  // namespace natle
