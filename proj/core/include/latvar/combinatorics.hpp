#pragma once

#include <vector>

#include "latvar/rational.hpp"

namespace latvar {

/// Natural log of a positive quantity. Composed formula terms stay within the
/// exp-representable range for every in-scope index (k <= 1e6).
struct LogScale {
  double value = 0.0;
  [[nodiscard]] double exp() const;
};

/// Return probabilities u_{2k} of the simple random walk on the undirected
/// D-dimensional lattice, k = 0..K.
struct ReturnProbSeries {
  int dimension = 1;
  std::vector<double> values;
};

/// ln(n!), exact at n in {0,1}, relative error <= 1e-13 throughout.
[[nodiscard]] LogScale log_factorial(long long n);

/// u_{2k} for the 1D lattice: (2k)! / (2^{2k} k! k!).
[[nodiscard]] double central_binomial_scaled(long long k);

/// u_{2k} for dimension 1, 2 or 3. The 3D value evaluates the double sum over
/// squared trinomial probabilities directly.
[[nodiscard]] double return_prob(int dimension, long long k);

/// values[k] = return_prob(dimension, k) for k = 0..max_k. Single pass:
/// 1D uses the ratio recurrence u_{2k} = u_{2k-2} (2k-1)/(2k), 2D squares it,
/// 3D advances the squared-trinomial sum by its three-term recurrence.
[[nodiscard]] ReturnProbSeries return_prob_series(int dimension, long long max_k);

/// i-th summand of the 1D variance sum, exact. Guarded to 1 <= i <= 64.
[[nodiscard]] Rational exact_term_1d(int i);

/// Exact-rational oracles for the floating paths above.
[[nodiscard]] Rational central_binomial_scaled_exact(int k);
[[nodiscard]] Rational return_prob_exact(int dimension, int k);

}  // namespace latvar
