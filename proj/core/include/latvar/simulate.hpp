#pragma once

#include <cstdint>

#include "latvar/closedform.hpp"
#include "latvar/combinatorics.hpp"
#include "latvar/lattice.hpp"

namespace latvar {

/// Euler-Maruyama configuration. Stability requires dt <= 0.1/D; the defaults
/// keep the dt bias (~dt/4 in the scalar case) below the statistical band.
struct SimulationConfig {
  double dt = 0.01;
  double horizon = 220.0;
  double burn_in = 20.0;
  long long ensemble = 64;
  std::uint64_t seed = 1;

  [[nodiscard]] static SimulationConfig defaults(int dimension);
  void validate(int dimension) const;
};

/// Per-node mean and standard error of the steady-state variance estimate.
/// The standard error is computed across ensemble members only (time samples
/// are autocorrelated); it is invalid for a single-trajectory ensemble.
struct VarianceEstimate {
  VarianceField mean;
  VarianceField std_error;
  bool std_error_valid = false;
  SimulationConfig config;
};

/// Work-budget guard: states * ensemble * steps per call.
inline constexpr double kMaxNodeSteps = 4e9;

/// Simulate x' = -L x + d with unit-spectral-density white disturbance via
/// x <- x - dt L x + sqrt(dt) xi. Trajectories use independent RNG streams
/// keyed by (seed, trajectory), and the reduction runs in trajectory order,
/// so results are bit-identical for any thread count.
[[nodiscard]] VarianceEstimate simulate_lattice(const LatticeSpec& spec,
                                                const SimulationConfig& config,
                                                int threads = 1);

/// Empirical u_{2k} for k = 0..max_k from independent simple random walks of
/// length 2*max_k on the undirected D-lattice.
[[nodiscard]] ReturnProbSeries simulate_random_walk_returns(int dimension, int max_k,
                                                            long long walks,
                                                            std::uint64_t seed);

}  // namespace latvar
