#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "latvar/rational.hpp"

namespace latvar {

enum class FitModel { log_fit, sqrt_fit, power_fit };

/// Least-squares fit of one of the scaling models over a stated index range.
///   log_fit:   y = a ln(n) + b
///   sqrt_fit:  y = a sqrt(n)        (b unused)
///   power_fit: y = a n^b
/// residual_rms is the RMS residual of the linearized regression.
struct FitResult {
  FitModel model = FitModel::log_fit;
  double a = 0.0;
  double b = 0.0;
  double residual_rms = 0.0;
  long long range_lo = 0;
  long long range_hi = 0;
};

/// Bracketing of a diagonal variance between two triangle/pyramid partial
/// sums. The bracket degenerates to equality on the left at n = 1, where the
/// triangle and square index sets coincide.
struct SandwichReport {
  long long n = 1;
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool holds() const {
    const bool lower_ok = (n == 1) ? lower <= middle : lower < middle;
    return lower_ok && middle < upper;
  }
};

/// Finite-index convergence evidence for an asymptotic limit.
struct ConvergenceTable {
  std::vector<long long> index;
  std::vector<double> ratio;      // V_n / sqrt(n) or Pi_N / sqrt(N)
  std::vector<double> deviation;  // |ratio - limit|
  double limit = 0.0;
};

/// Partial pyramid sum with an explicit p^{-3/2} tail estimate.
struct TailBoundReport {
  long long n = 1;
  double value = 0.0;
  double tail_bound = 0.0;
  double fitted_c = 0.0;  // constant of the c p^{-3/2} increment law
};

/// Tables of V_n/sqrt(n) and Pi_N/sqrt(N) at geometrically spaced indices
/// against 1/sqrt(pi) and 2/(3 sqrt(pi)).
[[nodiscard]] std::pair<ConvergenceTable, ConvergenceTable> limit_check_1d(long long n_max);

/// S_k by direct summation along the antidiagonal and by the closed form
/// (1/4) u_{2k}(2D); returned as {direct, closed}.
[[nodiscard]] std::pair<double, double> antidiagonal_sum_2d(long long k);

/// Triangle partial sum Delta_n = (1/4) sum_{k<n} u_{2k}(2D).
[[nodiscard]] double triangle_sum_2d(long long n);

/// Delta_n <= V_n(diag) <= Delta_{2n}.
[[nodiscard]] SandwichReport sandwich_2d(long long n);

/// G_p over the triangle i+j+k = p, direct and as (1/6) u_{2p}(3D).
[[nodiscard]] std::pair<double, double> pyramid_slice_sum_3d(long long p);

/// Termwise upper bound on G_p from the balanced-occupancy argument.
[[nodiscard]] double pyramid_slice_upper_bound_3d(long long p);

/// T_n = (1/6) sum_{k<n} u_{2k}(3D), with the fitted-c tail bound.
[[nodiscard]] TailBoundReport pyramid_sum_3d(long long n);

/// T_n <= V_n(diag) <= T_{2n}.
[[nodiscard]] SandwichReport sandwich_3d(long long n);

/// Known linear reference for the undirected 1D lattice, V_n = n/2.
/// Externally sourced comparison series, not derived here.
[[nodiscard]] double undirected_reference_1d(long long n);

[[nodiscard]] FitResult fit_scaling(
    std::span<const long long> index, std::span<const double> value, FitModel model,
    long long range_lo = std::numeric_limits<long long>::min(),
    long long range_hi = std::numeric_limits<long long>::max());

/// Exact-rational routes for the random-walk identities.
[[nodiscard]] Rational antidiagonal_sum_2d_exact_direct(int k);
[[nodiscard]] Rational antidiagonal_sum_2d_exact_closed(int k);
[[nodiscard]] Rational pyramid_slice_sum_3d_exact_direct(int p);
[[nodiscard]] Rational pyramid_slice_sum_3d_exact_closed(int p);

}  // namespace latvar
