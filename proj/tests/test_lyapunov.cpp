#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latvar/closedform.hpp"
#include "latvar/lattice.hpp"
#include "latvar/lyapunov.hpp"

using namespace latvar;

TEST_CASE("scalar lattice: 2 P = I") {
  const auto cov = solve_triangular_lyapunov(build_laplacian({1, 1}));
  REQUIRE(cov.size() == 1);
  CHECK(cov.P(0, 0) == 0.5);
}

TEST_CASE("1D N=2 hand solve") {
  const auto cov = solve_triangular_lyapunov(build_laplacian({1, 2}), true);
  CHECK(cov.P(0, 0) == 0.5);
  CHECK(cov.P(1, 1) == 0.75);
  CHECK(cov.P(1, 0) == 0.25);
  CHECK(cov.P(0, 1) == 0.25);
}

TEST_CASE("2D N=2 diagonal matches the closed form") {
  const auto cov = solve_triangular_lyapunov(build_laplacian({2, 2}));
  CHECK(cov.P(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(cov.P(1, 1) == doctest::Approx(0.28125).epsilon(1e-14));
  CHECK(cov.P(2, 2) == doctest::Approx(0.28125).epsilon(1e-14));
  CHECK(cov.P(3, 3) == doctest::Approx(0.3359375).epsilon(1e-14));
}

TEST_CASE("residual max-norm within 1e-10 * size; checked ordering never trips") {
  for (const LatticeSpec spec : {LatticeSpec{1, 50}, LatticeSpec{2, 6}, LatticeSpec{3, 3}}) {
    const auto lap = build_laplacian(spec);
    const auto cov = solve_triangular_lyapunov(lap, true);
    CHECK(lyapunov_residual(lap, cov) <= 1e-10 * static_cast<double>(lap.size()));
  }
}

TEST_CASE("P is symmetric positive definite") {
  const auto cov = solve_triangular_lyapunov(build_laplacian({2, 5}));
  CHECK((cov.P - cov.P.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_positive_definite(cov));
}

TEST_CASE("quadrature integral check") {
  const auto c1 = covariance_integral_check(build_laplacian({1, 1}), 40.0, 4000);
  CHECK(std::abs(c1.P(0, 0) - 0.5) <= 1e-8);

  const auto c3 = covariance_integral_check(build_laplacian({1, 3}), 40.0, 4000);
  CHECK(std::abs(c3.P(0, 0) - 0.5) <= 1e-6);
  CHECK(std::abs(c3.P(1, 1) - 0.75) <= 1e-6);
  CHECK(std::abs(c3.P(2, 2) - 0.9375) <= 1e-6);

  const auto c2 = covariance_integral_check(build_laplacian({2, 2}), 40.0, 4000);
  const auto solve = solve_triangular_lyapunov(build_laplacian({2, 2}));
  CHECK((c2.P - solve.P).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("variance_diagonal re-indexes by lattice coordinates") {
  const LatticeSpec spec{2, 2};
  const auto field = variance_diagonal(solve_triangular_lyapunov(build_laplacian(spec)), spec);
  CHECK(field.at(Coordinate::of(2, 2)) == doctest::Approx(0.3359375).epsilon(1e-14));

  const LatticeSpec spec3{3, 1};
  const auto f3 = variance_diagonal(solve_triangular_lyapunov(build_laplacian(spec3)), spec3);
  CHECK(f3.values[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  CHECK_THROWS_AS((void)variance_diagonal(solve_triangular_lyapunov(build_laplacian({1, 3})),
                                          LatticeSpec{2, 2}),
                  std::invalid_argument);
}

TEST_CASE("rejects unstable or malformed input") {
  // Non-positive diagonal: unstable closed loop.
  ModifiedLaplacian bad(2, 1,
                        {{0, 0, -1.0}, {1, 0, -1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS((void)solve_triangular_lyapunov(bad), std::invalid_argument);

  ModifiedLaplacian upper(2, 1, {{0, 0, 1.0}, {0, 1, -1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS((void)solve_triangular_lyapunov(upper), std::invalid_argument);
}

TEST_CASE("state-count guards") {
  CHECK_THROWS_AS((void)solve_triangular_lyapunov(build_laplacian({1, 10'001})),
                  std::length_error);
  CHECK_THROWS_AS((void)covariance_integral_check(build_laplacian({1, 201}), 40.0, 100),
                  std::length_error);
  CHECK_THROWS_AS((void)covariance_integral_check(build_laplacian({1, 2}), -1.0, 100),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)covariance_integral_check(build_laplacian({1, 2}), 40.0, 1),
                  std::invalid_argument);
}
