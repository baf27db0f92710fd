#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latvar/closedform.hpp"
#include "latvar/simulate.hpp"

using namespace latvar;

TEST_CASE("scalar case converges to the Euler-Maruyama fixed point 1/(2-dt), not 1/2") {
  SimulationConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 220.0;
  cfg.burn_in = 20.0;
  cfg.ensemble = 256;
  cfg.seed = 7;
  const auto est = simulate_lattice({1, 1}, cfg, 2);
  REQUIRE(est.std_error_valid);
  const double se = est.std_error.values[0];
  CHECK(se > 0.0);
  const double target = 1.0 / (2.0 - cfg.dt);  // dt bias ~ dt/4
  CHECK(std::abs(est.mean.values[0] - target) <= 4.0 * se);
  CHECK(std::abs(est.mean.values[0] - 0.5) > 2.0 * se);
}

TEST_CASE("bit-identical across repeats and thread counts; seeds matter") {
  const LatticeSpec spec{2, 3};
  SimulationConfig cfg = SimulationConfig::defaults(2);
  cfg.horizon = 50.0;
  cfg.burn_in = 10.0;
  cfg.ensemble = 12;
  cfg.seed = 42;

  const auto a = simulate_lattice(spec, cfg, 1);
  const auto b = simulate_lattice(spec, cfg, 1);
  const auto c = simulate_lattice(spec, cfg, 2);
  const auto d = simulate_lattice(spec, cfg, 3);
  for (std::size_t i = 0; i < a.mean.values.size(); ++i) {
    CHECK(a.mean.values[i] == b.mean.values[i]);
    CHECK(a.mean.values[i] == c.mean.values[i]);
    CHECK(a.mean.values[i] == d.mean.values[i]);
    CHECK(a.std_error.values[i] == c.std_error.values[i]);
  }

  cfg.seed = 43;
  const auto e = simulate_lattice(spec, cfg, 1);
  CHECK(e.mean.values[0] != a.mean.values[0]);
}

TEST_CASE("estimates land within 5 standard errors of the closed form") {
  const LatticeSpec spec{2, 2};
  SimulationConfig cfg = SimulationConfig::defaults(2);
  cfg.ensemble = 48;
  cfg.horizon = 120.0;
  cfg.seed = 3;
  const auto est = simulate_lattice(spec, cfg, 2);
  const auto closed = variance_field(spec);
  REQUIRE(est.std_error_valid);
  for (std::size_t i = 0; i < closed.values.size(); ++i) {
    CHECK(std::abs(est.mean.values[i] - closed.values[i]) <=
          5.0 * est.std_error.values[i]);
  }
}

TEST_CASE("degenerate sample sizes are flagged, not silently returned") {
  SimulationConfig cfg;
  cfg.dt = 0.1;
  cfg.burn_in = 1.0;
  cfg.horizon = 1.0 + cfg.dt;  // exactly one time sample
  cfg.ensemble = 1;
  cfg.seed = 1;
  const auto est = simulate_lattice({1, 1}, cfg, 1);
  CHECK_FALSE(est.std_error_valid);
  CHECK(std::isnan(est.std_error.values[0]));
  CHECK(est.mean.values[0] >= 0.0);

  cfg.horizon = cfg.burn_in;  // nothing after burn-in
  CHECK_THROWS_AS((void)simulate_lattice({1, 1}, cfg, 1), std::invalid_argument);
}

TEST_CASE("config guards") {
  SimulationConfig cfg = SimulationConfig::defaults(3);
  cfg.dt = 0.05;  // above 0.1/3
  CHECK_THROWS_AS((void)simulate_lattice({3, 2}, cfg, 1), std::invalid_argument);

  cfg = SimulationConfig::defaults(1);
  cfg.ensemble = 0;
  CHECK_THROWS_AS((void)simulate_lattice({1, 1}, cfg, 1), std::invalid_argument);

  cfg = SimulationConfig::defaults(1);
  cfg.ensemble = 100'000;
  CHECK_THROWS_AS((void)simulate_lattice({1, 100}, cfg, 1), std::length_error);
}

TEST_CASE("empty random walks return with probability one") {
  const auto s = simulate_random_walk_returns(3, 0, 10, 5);
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == 1.0);
}

TEST_CASE("empirical return probabilities within binomial 4 sigma, k <= 10") {
  const long long walks = 20000;
  for (int d = 1; d <= 3; ++d) {
    const auto emp = simulate_random_walk_returns(d, 10, walks, 2026);
    const auto ana = return_prob_series(d, 10);
    for (int k = 0; k <= 10; ++k) {
      const double p = ana.values[static_cast<size_t>(k)];
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(walks));
      CHECK(std::abs(emp.values[static_cast<size_t>(k)] - p) <= 4.0 * sigma + 1e-12);
    }
  }
}

TEST_CASE("random walks are seed-deterministic") {
  const auto a = simulate_random_walk_returns(2, 5, 5000, 9);
  const auto b = simulate_random_walk_returns(2, 5, 5000, 9);
  const auto c = simulate_random_walk_returns(2, 5, 5000, 10);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}
