#pragma once

#include <vector>

#include "latvar/lattice.hpp"
#include "latvar/rational.hpp"

namespace latvar {

/// Per-follower steady-state variance, stored in linear-index order.
struct VarianceField {
  LatticeSpec spec;
  std::vector<double> values;

  [[nodiscard]] double at(const Coordinate& coord) const {
    return values[static_cast<std::size_t>(coordinate_to_index(spec, coord) - 1)];
  }
};

/// Memory guard for full-field evaluation.
inline constexpr long long kMaxFieldStates = 10'000'000;

/// Index guard for the exact-rational mode.
inline constexpr int kMaxExactIndex = 64;

/// V_n on the 1D lattice, as the running half-sum of 1D return probabilities.
[[nodiscard]] double variance_1d(long long n);

/// The closed product form n * u_{2n} of the same quantity.
[[nodiscard]] double variance_1d_product(long long n);

/// Total 1D variance normalized by the number of followers.
[[nodiscard]] double normalized_total_1d(long long n_followers);

/// Variance of follower (n, m) on the 2D lattice. Terms are generated by
/// ratio recurrences and accumulated antidiagonal-major with compensation.
[[nodiscard]] double variance_2d(long long n, long long m);

/// Variance of follower (n, m, l) on the 3D lattice.
[[nodiscard]] double variance_3d(long long n, long long m, long long l);

/// Whole-grid evaluation in one pass over the summand grid followed by
/// axis-wise prefix sums, O(N^D) total.
[[nodiscard]] VarianceField variance_field(const LatticeSpec& spec);

/// values[n-1] = variance of the diagonal follower (n,..,n), n = 1..n_max,
/// computed in a single prefix pass.
[[nodiscard]] std::vector<double> diagonal_variances_2d(long long n_max);
[[nodiscard]] std::vector<double> diagonal_variances_3d(long long n_max);

/// Exact-rational mode (indices guarded to kMaxExactIndex).
[[nodiscard]] Rational variance_1d_exact(int n);
[[nodiscard]] Rational variance_1d_exact_product(int n);
[[nodiscard]] Rational normalized_total_1d_exact(int n_followers);
[[nodiscard]] Rational variance_2d_exact(int n, int m);
[[nodiscard]] Rational variance_3d_exact(int n, int m, int l);

}  // namespace latvar
