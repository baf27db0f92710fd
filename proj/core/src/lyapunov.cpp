#include "latvar/lyapunov.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace latvar {
namespace {

void require_lower_triangular_stable(const ModifiedLaplacian& lap) {
  for (const auto& e : lap.entries()) {
    if (e.col > e.row) {
      throw std::invalid_argument("solve_triangular_lyapunov: matrix is not lower triangular");
    }
    if (e.col == e.row && e.value <= 0.0) {
      throw std::invalid_argument(
          "solve_triangular_lyapunov: non-positive diagonal entry at row " +
          std::to_string(e.row + 1) + " (unstable closed loop)");
    }
  }
}

}  // namespace

CovarianceMatrix solve_triangular_lyapunov(const ModifiedLaplacian& lap, bool checked) {
  const long long n = lap.size();
  if (n > kMaxLyapunovStates) {
    throw std::length_error("solve_triangular_lyapunov: " + std::to_string(n) +
                            " states exceeds the dense guard of " +
                            std::to_string(kMaxLyapunovStates) +
                            "; use the closed-form module instead");
  }
  require_lower_triangular_stable(lap);

  const double diag = lap.diagonal();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  std::vector<char> solved;
  if (checked) solved.assign(static_cast<std::size_t>(n * n), 0);

  auto mark = [&](long long i, long long j) {
    solved[static_cast<std::size_t>(i * n + j)] = 1;
  };
  auto read = [&](long long i, long long j) -> double {
    if (checked && !solved[static_cast<std::size_t>(i * n + j)]) {
      throw std::logic_error("solve_triangular_lyapunov: read of unsolved entry (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return P(i, j);
  };

  for (long long j = 0; j < n; ++j) {
    const auto row_j = lap.row_off_diagonal(j);
    for (long long i = j; i < n; ++i) {
      double rhs = (i == j) ? 1.0 : 0.0;
      for (const auto& e : lap.row_off_diagonal(i)) {
        rhs -= e.value * read(e.col, j);  // P_kj with k < i, same column
      }
      for (const auto& e : row_j) {
        rhs -= e.value * read(i, e.col);  // P_ik with k < j, earlier columns
      }
      const double value = rhs / (2.0 * diag);
      P(i, j) = value;
      P(j, i) = value;
      if (checked) {
        mark(i, j);
        mark(j, i);
      }
    }
  }
  return CovarianceMatrix{std::move(P)};
}

CovarianceMatrix covariance_integral_check(const ModifiedLaplacian& lap, double t_max,
                                           long long steps) {
  const long long n = lap.size();
  if (n > kMaxIntegralStates) {
    throw std::length_error("covariance_integral_check: " + std::to_string(n) +
                            " states exceeds the guard of " +
                            std::to_string(kMaxIntegralStates));
  }
  if (!(t_max > 0.0)) throw std::invalid_argument("covariance_integral_check: t_max must be > 0");
  if (steps < 2) throw std::invalid_argument("covariance_integral_check: steps must be >= 2");
  if (steps % 2 != 0) ++steps;  // Simpson needs an even panel count

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : lap.entries()) L(e.row, e.col) = e.value;

  const double h = t_max / static_cast<double>(steps);
  const Eigen::MatrixXd step = (-L * h).exp();

  // f(t) = exp(-L t) exp(-L^T t); E starts at the identity and is advanced by
  // one exp(-L h) factor per node.
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);  // f(0), weight 1
  for (long long k = 1; k <= steps; ++k) {
    E = (E * step).eval();
    const double w = (k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc.noalias() += w * (E * E.transpose());
  }
  Eigen::MatrixXd P = (h / 3.0) * acc;
  P = ((P + P.transpose()) / 2.0).eval();
  return CovarianceMatrix{std::move(P)};
}

VarianceField variance_diagonal(const CovarianceMatrix& cov, const LatticeSpec& spec) {
  spec.validate();
  if (cov.size() != spec.state_count()) {
    throw std::invalid_argument("variance_diagonal: covariance size " +
                                std::to_string(cov.size()) + " does not match the " +
                                std::to_string(spec.state_count()) + "-state lattice");
  }
  VarianceField field{spec, std::vector<double>(static_cast<std::size_t>(cov.size()))};
  for (long long i = 0; i < cov.size(); ++i) {
    field.values[static_cast<std::size_t>(i)] = cov.P(i, i);
  }
  return field;
}

double lyapunov_residual(const ModifiedLaplacian& lap, const CovarianceMatrix& cov) {
  const long long n = lap.size();
  // L P + P L^T - I = LP + (LP)^T - I since P is symmetric.
  Eigen::MatrixXd LP = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : lap.entries()) {
    LP.row(e.row).noalias() += e.value * cov.P.row(e.col);
  }
  const Eigen::MatrixXd res = LP + LP.transpose() - Eigen::MatrixXd::Identity(n, n);
  return res.cwiseAbs().maxCoeff();
}

bool is_positive_definite(const CovarianceMatrix& cov) {
  if ((cov.P.diagonal().array() <= 0.0).any()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(cov.P);
  return llt.info() == Eigen::Success;
}

}  // namespace latvar
