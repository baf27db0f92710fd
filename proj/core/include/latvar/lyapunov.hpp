#pragma once

#include <Eigen/Dense>

#include "latvar/closedform.hpp"
#include "latvar/lattice.hpp"

namespace latvar {

/// Steady-state covariance P of the closed loop, solving L P + P L^T = I.
/// Symmetric positive definite; both triangles stored.
struct CovarianceMatrix {
  Eigen::MatrixXd P;

  [[nodiscard]] long long size() const { return P.rows(); }
};

/// Dense-storage guard (~800 MB at the limit). Larger lattices should use the
/// closed-form module instead.
inline constexpr long long kMaxLyapunovStates = 10'000;

/// State guard for the matrix-exponential quadrature check.
inline constexpr long long kMaxIntegralStates = 200;

/// Entrywise triangular solve:
///   (L_ii + L_jj) P_ij = delta_ij - sum_{k<i} L_ik P_kj - sum_{k<j} L_jk P_ik.
/// Entries are solved column-major; every read touches an already-solved
/// entry, and `checked` verifies that sweep (std::logic_error on violation).
/// Dependencies only cross antidiagonals of (i, j), so entries with equal
/// i+j could be solved concurrently; the solver runs sequentially, which is
/// one deterministic schedule of that wavefront order.
[[nodiscard]] CovarianceMatrix solve_triangular_lyapunov(const ModifiedLaplacian& lap,
                                                         bool checked = false);

/// Quadrature approximation of P = integral of exp(-L t) exp(-L^T t) dt over
/// [0, t_max], composite Simpson on a uniform grid of `steps` panels with
/// incrementally propagated matrix exponentials. Consistency check only.
[[nodiscard]] CovarianceMatrix covariance_integral_check(const ModifiedLaplacian& lap,
                                                         double t_max, long long steps);

/// Diagonal of P re-indexed by lattice coordinates.
[[nodiscard]] VarianceField variance_diagonal(const CovarianceMatrix& cov,
                                              const LatticeSpec& spec);

/// max-norm of L P + P L^T - I.
[[nodiscard]] double lyapunov_residual(const ModifiedLaplacian& lap,
                                       const CovarianceMatrix& cov);

/// Cholesky succeeds and the diagonal is strictly positive.
[[nodiscard]] bool is_positive_definite(const CovarianceMatrix& cov);

}  // namespace latvar
