#include "latvar/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace latvar {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (stream * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
  return splitmix64(s);
}

/// Standard-normal stream over mt19937_64. Uniforms and the Box-Muller
/// transform are spelled out so the byte stream is engine-defined only.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(stream_seed(seed, stream)) {}

  double uniform() {  // (0, 1]
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Lemire's unbiased bounded draw, fixed 64->32 reduction.
std::uint32_t bounded(NormalStream& rng, std::uint32_t n) {
  const std::uint64_t r = rng.raw();
  const std::uint32_t x = static_cast<std::uint32_t>(r >> 32);
  std::uint64_t m = static_cast<std::uint64_t>(x) * n;
  std::uint32_t lo = static_cast<std::uint32_t>(m);
  if (lo < n) {
    const std::uint32_t t = (-n) % n;
    while (lo < t) {
      const std::uint32_t x2 = static_cast<std::uint32_t>(rng.raw() >> 32);
      m = static_cast<std::uint64_t>(x2) * n;
      lo = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

struct NeighborTable {
  // Predecessor state indices per node, flattened.
  std::vector<std::int64_t> offsets;
  std::vector<std::int64_t> neighbors;
};

NeighborTable build_neighbors(const ModifiedLaplacian& lap) {
  NeighborTable t;
  t.offsets.reserve(static_cast<std::size_t>(lap.size()) + 1);
  t.offsets.push_back(0);
  for (long long i = 0; i < lap.size(); ++i) {
    for (const auto& e : lap.row_off_diagonal(i)) t.neighbors.push_back(e.col);
    t.offsets.push_back(static_cast<std::int64_t>(t.neighbors.size()));
  }
  return t;
}

// Time-averaged squared state per node for one trajectory.
void run_trajectory(const NeighborTable& nbr, int dimension, long long nodes,
                    const SimulationConfig& cfg, std::uint64_t trajectory,
                    double* node_means) {
  NormalStream rng(cfg.seed, trajectory);
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double decay = 1.0 - dt * static_cast<double>(dimension);

  const long long total_steps = static_cast<long long>(std::llround(cfg.horizon / dt));
  const long long burn_steps = static_cast<long long>(std::llround(cfg.burn_in / dt));
  const long long samples = total_steps - burn_steps;

  std::vector<double> x(static_cast<std::size_t>(nodes), 0.0);
  std::vector<double> x_next(static_cast<std::size_t>(nodes), 0.0);
  std::vector<double> sumsq(static_cast<std::size_t>(nodes), 0.0);

  for (long long step = 0; step < total_steps; ++step) {
    for (long long i = 0; i < nodes; ++i) {
      double pull = 0.0;
      for (std::int64_t q = nbr.offsets[static_cast<std::size_t>(i)];
           q < nbr.offsets[static_cast<std::size_t>(i) + 1]; ++q) {
        pull += x[static_cast<std::size_t>(nbr.neighbors[static_cast<std::size_t>(q)])];
      }
      x_next[static_cast<std::size_t>(i)] =
          decay * x[static_cast<std::size_t>(i)] + dt * pull + sqrt_dt * rng.next();
    }
    x.swap(x_next);
    if (step >= burn_steps) {
      for (long long i = 0; i < nodes; ++i) {
        const double v = x[static_cast<std::size_t>(i)];
        sumsq[static_cast<std::size_t>(i)] += v * v;
      }
    }
  }
  for (long long i = 0; i < nodes; ++i) {
    node_means[i] = sumsq[static_cast<std::size_t>(i)] / static_cast<double>(samples);
  }
}

}  // namespace

SimulationConfig SimulationConfig::defaults(int dimension) {
  SimulationConfig cfg;
  cfg.dt = 0.01 / static_cast<double>(dimension);
  cfg.horizon = 220.0;
  cfg.burn_in = 20.0;
  cfg.ensemble = 64;
  cfg.seed = 1;
  return cfg;
}

void SimulationConfig::validate(int dimension) const {
  if (!(dt > 0.0)) throw std::invalid_argument("SimulationConfig: dt must be > 0");
  if (dt > 0.1 / static_cast<double>(dimension)) {
    throw std::invalid_argument("SimulationConfig: dt must be <= 0.1/D = " +
                                std::to_string(0.1 / dimension) + " for stability");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("SimulationConfig: horizon must be > 0");
  if (burn_in < 0.0 || burn_in >= horizon) {
    throw std::invalid_argument("SimulationConfig: burn_in must be in [0, horizon)");
  }
  if (ensemble < 1) throw std::invalid_argument("SimulationConfig: ensemble must be >= 1");
}

VarianceEstimate simulate_lattice(const LatticeSpec& spec, const SimulationConfig& config,
                                  int threads) {
  spec.validate();
  config.validate(spec.dimension);
  if (threads < 1) threads = 1;

  const long long nodes = spec.state_count();
  const long long total_steps = static_cast<long long>(std::llround(config.horizon / config.dt));
  const long long burn_steps = static_cast<long long>(std::llround(config.burn_in / config.dt));
  if (total_steps - burn_steps < 1) {
    throw std::invalid_argument("simulate_lattice: no samples after burn-in");
  }
  const double work = static_cast<double>(nodes) * static_cast<double>(config.ensemble) *
                      static_cast<double>(total_steps);
  if (work > kMaxNodeSteps) {
    throw std::length_error("simulate_lattice: work " + std::to_string(work) +
                            " node-steps exceeds the budget of " +
                            std::to_string(kMaxNodeSteps));
  }

  const ModifiedLaplacian lap = build_laplacian(spec);
  const NeighborTable nbr = build_neighbors(lap);

  const std::size_t R = static_cast<std::size_t>(config.ensemble);
  std::vector<double> per_trajectory(R * static_cast<std::size_t>(nodes));

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      run_trajectory(nbr, spec.dimension, nodes, config, static_cast<std::uint64_t>(r),
                     per_trajectory.data() + r * static_cast<std::size_t>(nodes));
    }
  };

  if (threads == 1 || R == 1) {
    worker(0, R);
  } else {
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(threads), R);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::size_t chunk = (R + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(R, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  VarianceEstimate est;
  est.config = config;
  est.mean = VarianceField{spec, std::vector<double>(static_cast<std::size_t>(nodes), 0.0)};
  est.std_error = VarianceField{spec, std::vector<double>(static_cast<std::size_t>(nodes), 0.0)};
  est.std_error_valid = config.ensemble > 1;

  for (long long i = 0; i < nodes; ++i) {
    // Reduction in trajectory order, independent of the thread partition.
    double mean = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      mean += per_trajectory[r * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(i)];
    }
    mean /= static_cast<double>(R);
    est.mean.values[static_cast<std::size_t>(i)] = mean;

    if (est.std_error_valid) {
      double ss = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        const double d =
            per_trajectory[r * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(i)] -
            mean;
        ss += d * d;
      }
      const double sample_var = ss / static_cast<double>(R - 1);
      est.std_error.values[static_cast<std::size_t>(i)] =
          std::sqrt(sample_var / static_cast<double>(R));
    } else {
      est.std_error.values[static_cast<std::size_t>(i)] =
          std::numeric_limits<double>::quiet_NaN();
    }
  }
  return est;
}

ReturnProbSeries simulate_random_walk_returns(int dimension, int max_k, long long walks,
                                              std::uint64_t seed) {
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("simulate_random_walk_returns: dimension must be 1, 2 or 3");
  }
  if (max_k < 0) throw std::invalid_argument("simulate_random_walk_returns: max_k must be >= 0");
  if (walks < 1) throw std::invalid_argument("simulate_random_walk_returns: walks must be >= 1");

  const std::uint32_t directions = 2 * static_cast<std::uint32_t>(dimension);
  std::vector<long long> returns(static_cast<std::size_t>(max_k) + 1, 0);
  returns[0] = walks;  // the empty walk is at the origin

  for (long long w = 0; w < walks; ++w) {
    NormalStream rng(seed, static_cast<std::uint64_t>(w));
    long long pos[3] = {0, 0, 0};
    for (int k = 1; k <= max_k; ++k) {
      for (int half = 0; half < 2; ++half) {
        const std::uint32_t move = bounded(rng, directions);
        const int axis = static_cast<int>(move >> 1);
        pos[axis] += (move & 1u) ? 1 : -1;
      }
      if (pos[0] == 0 && pos[1] == 0 && pos[2] == 0) {
        ++returns[static_cast<std::size_t>(k)];
      }
    }
  }

  ReturnProbSeries series;
  series.dimension = dimension;
  series.values.reserve(static_cast<std::size_t>(max_k) + 1);
  for (int k = 0; k <= max_k; ++k) {
    series.values.push_back(static_cast<double>(returns[static_cast<std::size_t>(k)]) /
                            static_cast<double>(walks));
  }
  return series;
}

}  // namespace latvar
