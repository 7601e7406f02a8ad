#include "doctest.h"

#include <cmath>
#include <random>

#include "errors.hpp"
#include "fixtures.hpp"
#include "linsolve.hpp"
#include "operators.hpp"

using namespace natle;

namespace {

SmoothnessWeights random_weights(int w, int h, std::uint64_t seed, double hi = 20.0) {
  return {testing::random_plane(w, h, seed, 0.0, hi), testing::random_plane(w, h, seed + 1, 0.0, hi)};
}

double residual_norm(const SparseSystem& A, const PlanarImage& x, const PlanarImage& b) {
  std::vector<double> xv(x.values().begin(), x.values().end()), ax;
  A.apply(xv, ax);
  double s = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) s += (ax[i] - b[i]) * (ax[i] - b[i]);
  return std::sqrt(s);
}

double norm(const PlanarImage& b) {
  double s = 0.0;
  for (double v : b.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("identity system returns the right-hand side exactly") {
  const PlanarImage b = testing::random_plane(6, 4, 1);
  SolveReport rep;
  const PlanarImage x = solve_spd(SparseSystem(6, 4), b, {}, &rep);
  CHECK(x == b);
  CHECK(rep.iterations == 0);
}

TEST_CASE("2x2 hand-inverted system") {
  const SparseSystem A = assemble_reflectance_system(3.0, 2, 1);
  const PlanarImage b(2, 1, std::vector<double>{1.0, 0.0});
  SolveConfig cfg;
  cfg.rel_tolerance = 1e-12;
  const PlanarImage x = solve_spd(A, b, cfg);
  CHECK(x[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-10));
  CHECK(x[1] == doctest::Approx(3.0 / 7.0).epsilon(1e-10));

  const auto dense = solve_dense_oracle(A.dense(), 2, {1.0, 0.0});
  CHECK(dense[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
  CHECK(dense[1] == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("dense oracle guards") {
  CHECK(solve_dense_oracle({1, 0, 0, 1}, 2, {0.25, 0.5}) == std::vector<double>{0.25, 0.5});
  CHECK_THROWS_AS(solve_dense_oracle(std::vector<double>(401 * 401, 0.0), 401, std::vector<double>(401)), Error);
  CHECK_THROWS_AS(solve_dense_oracle({1, 1, 1, 1}, 2, {1, 1}), Error);
  CHECK_THROWS_AS(solve_dense_oracle({1, 0, 0}, 2, {1, 1}), Error);
}

TEST_CASE("iterative solve matches the dense oracle on a random 10x10 image") {
  const SparseSystem A = assemble_illumination_system(random_weights(10, 10, 17));
  const PlanarImage b = testing::random_plane(10, 10, 18);
  const PlanarImage x = solve_spd(A, b, {});
  const auto ref = solve_dense_oracle(A.dense(), A.order(), {b.values().begin(), b.values().end()});
  CHECK(testing::max_abs_diff(x.values(), ref) <= 1e-5);
  CHECK(residual_norm(A, x, b) <= 1e-6 * norm(b));
}

TEST_CASE("oracle and iterative agree on 20 random 8x8 systems, both preconditioners") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const SparseSystem A = trial % 2 ? assemble_illumination_system(random_weights(8, 8, rng()))
                                     : assemble_reflectance_system(0.5 + trial, 8, 8);
    const PlanarImage b = testing::random_plane(8, 8, rng(), -1.0, 2.0);
    const auto ref = solve_dense_oracle(A.dense(), A.order(), {b.values().begin(), b.values().end()});
    for (Preconditioner pc : {Preconditioner::jacobi, Preconditioner::none}) {
      SolveConfig cfg;
      cfg.preconditioner = pc;
      const PlanarImage x = solve_spd(A, b, cfg);
      CHECK(testing::max_abs_diff(x.values(), ref) <= 1e-5);
    }
  }
}

TEST_CASE("solve is deterministic") {
  const SparseSystem A = assemble_illumination_system(random_weights(31, 17, 4));
  const PlanarImage b = testing::random_plane(31, 17, 5);
  CHECK(solve_spd(A, b, {}) == solve_spd(A, b, {}));
}

TEST_CASE("zero right-hand side gives zero") {
  const SparseSystem A = assemble_reflectance_system(3.0, 4, 4);
  const PlanarImage x = solve_spd(A, PlanarImage(4, 4), {});
  for (double v : x.values()) CHECK(v == 0.0);
}

TEST_CASE("non-convergence reports the achieved residual") {
  const SparseSystem A = assemble_illumination_system(random_weights(40, 40, 6, 1000.0));
  const PlanarImage b = testing::random_plane(40, 40, 7);
  SolveConfig cfg;
  cfg.max_iterations = 2;
  cfg.rel_tolerance = 1e-12;
  try {
    solve_spd(A, b, cfg);
    FAIL("expected NotConvergedError");
  } catch (const NotConvergedError& e) {
    CHECK(e.code() == ErrorCode::not_converged);
    CHECK(e.iterations() == 2);
    CHECK(e.relative_residual() > 1e-12);
    CHECK(std::isfinite(e.relative_residual()));
  }
}

TEST_CASE("argument errors") {
  const SparseSystem A(3, 3);
  CHECK_THROWS_AS(solve_spd(A, PlanarImage(3, 2), {}), Error);
  SolveConfig bad;
  bad.rel_tolerance = 0.0;
  CHECK_THROWS_AS(solve_spd(A, PlanarImage(3, 3), bad), Error);
  bad = {};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(solve_spd(A, PlanarImage(3, 3), bad), Error);
  PlanarImage nan_rhs(3, 3);
  nan_rhs[4] = std::nan("");
  CHECK_THROWS_AS(solve_spd(A, nan_rhs, {}), Error);
}
