#include "latvar/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "latvar/combinatorics.hpp"
#include "latvar/summation.hpp"

namespace latvar {
namespace {

constexpr double kLogFour = 1.3862943611198906;
constexpr double kLogSix = 1.791759469228055;

void require_positive(long long v, const char* name) {
  if (v < 1) {
    throw std::invalid_argument(std::string(name) + " must be >= 1, got " +
                                std::to_string(v));
  }
}

void require_exact_index(int v, const char* name) {
  if (v < 1 || v > kMaxExactIndex) {
    throw std::invalid_argument(std::string(name) + " must be in [1, " +
                                std::to_string(kMaxExactIndex) + "] in exact mode, got " +
                                std::to_string(v));
  }
}

// 2D summand t(i,j) = (2s-4)! / (4 * 4^{2s-4} ((i-1)!(j-1)!)^2), s = i+j.
// Stepping one index up by one (s is the value before the step, idx the
// stepped index before the step): ratio = (2s-3)(2s-2) / (16 idx^2).
// Along a line the terms peak where the ratio crosses 1; the far tails
// underflow, so sweeps start at the peak and walk outward.
double log_term_2d(long long i, long long j) {
  const long long s = i + j;
  return log_factorial(2 * s - 4).value - kLogFour -
         static_cast<double>(2 * s - 4) * kLogFour -
         2.0 * (log_factorial(i - 1).value + log_factorial(j - 1).value);
}

double term_ratio_2d_axis(long long s_before, long long idx_before) {
  const double a = static_cast<double>(2 * s_before - 3);
  const double b = static_cast<double>(2 * s_before - 2);
  const double d = static_cast<double>(idx_before);
  return a * b / (16.0 * d * d);
}

// 3D summand t(i,j,k) = 6^{6-2s} (2s-6)! / (6 ((i-1)!(j-1)!(k-1)!)^2),
// s = i+j+k; axis step ratio = (2s-5)(2s-4) / (36 idx^2).
double log_term_3d(long long i, long long j, long long k) {
  const long long s = i + j + k;
  return static_cast<double>(6 - 2 * s) * kLogSix + log_factorial(2 * s - 6).value -
         kLogSix - 2.0 * (log_factorial(i - 1).value + log_factorial(j - 1).value +
                          log_factorial(k - 1).value);
}

double term_ratio_3d_axis(long long s_before, long long idx_before) {
  const double a = static_cast<double>(2 * s_before - 5);
  const double b = static_cast<double>(2 * s_before - 4);
  const double d = static_cast<double>(idx_before);
  return a * b / (36.0 * d * d);
}

// n! as double, exact through 22! and correctly rounded through 170!.
const double* factorial_table() {
  static const auto table = [] {
    static double t[171];
    t[0] = 1.0;
    for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table;
}

// Sweep starts: direct factorial arithmetic keeps small-index terms exact
// (the spec values are dyadic rationals); large sums go through log scale.
double term_2d_start(long long i, long long j) {
  const long long s = i + j;
  if (2 * s - 4 <= 170) {
    const double* fact = factorial_table();
    const double den = fact[i - 1] * fact[j - 1];
    return fact[2 * s - 4] / (4.0 * std::pow(4.0, static_cast<double>(2 * s - 4))) /
           (den * den);
  }
  return std::exp(log_term_2d(i, j));
}

double term_3d_start(long long i, long long j, long long k) {
  const long long s = i + j + k;
  if (2 * s - 6 <= 170) {
    const double* fact = factorial_table();
    const double den = fact[i - 1] * fact[j - 1] * fact[k - 1];
    return fact[2 * s - 6] / (6.0 * std::pow(6.0, static_cast<double>(2 * s - 6))) /
           (den * den);
  }
  return std::exp(log_term_3d(i, j, k));
}

Rational term_ratio_2d_axis_exact(long long s_before, long long idx_before) {
  return Rational(BigInt(2 * s_before - 3) * BigInt(2 * s_before - 2),
                  BigInt(16) * BigInt(idx_before) * BigInt(idx_before));
}

Rational term_ratio_3d_axis_exact(long long s_before, long long idx_before) {
  return Rational(BigInt(2 * s_before - 5) * BigInt(2 * s_before - 4),
                  BigInt(36) * BigInt(idx_before) * BigInt(idx_before));
}

// Fill row[j_lo..j_hi] (1-based j, row[j-1] slots) with t(i, j) by sweeping
// outward from the in-range peak at j ~ min(i, j_hi). Slots past an underflow
// are true zeros.
void fill_row_2d(double* row, long long i, long long j_lo, long long j_hi) {
  const long long j_peak = std::clamp(i, j_lo, j_hi);
  const double t_peak = term_2d_start(i, j_peak);
  double t = t_peak;
  for (long long j = j_peak; j <= j_hi; ++j) {
    row[j - 1] = t;
    if (t == 0.0) {
      std::fill(row + j, row + j_hi, 0.0);
      break;
    }
    if (j < j_hi) t *= term_ratio_2d_axis(i + j, j);
  }
  t = t_peak;
  for (long long j = j_peak - 1; j >= j_lo; --j) {
    t /= term_ratio_2d_axis(i + j, j);
    row[j - 1] = t;
    if (t == 0.0) {
      std::fill(row + j_lo - 1, row + j - 1, 0.0);
      break;
    }
  }
}

// Same along the k axis of the 3D summand at fixed (i, j); peak at
// k ~ (i+j)/2.
void fill_row_3d(double* row, long long i, long long j, long long k_lo, long long k_hi) {
  const long long k_peak = std::clamp((i + j) / 2, k_lo, k_hi);
  const double t_peak = term_3d_start(i, j, k_peak);
  double t = t_peak;
  for (long long k = k_peak; k <= k_hi; ++k) {
    row[k - 1] = t;
    if (t == 0.0) {
      std::fill(row + k, row + k_hi, 0.0);
      break;
    }
    if (k < k_hi) t *= term_ratio_3d_axis(i + j + k, k);
  }
  t = t_peak;
  for (long long k = k_peak - 1; k >= k_lo; --k) {
    t /= term_ratio_3d_axis(i + j + k, k);
    row[k - 1] = t;
    if (t == 0.0) {
      std::fill(row + k_lo - 1, row + k - 1, 0.0);
      break;
    }
  }
}

}  // namespace

double variance_1d(long long n) {
  require_positive(n, "n");
  CompensatedSum sum;
  double u = 1.0;
  for (long long k = 0; k < n; ++k) {
    if (k > 0) u *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
    sum.add(0.5 * u);
  }
  return sum.value();
}

double variance_1d_product(long long n) {
  require_positive(n, "n");
  return static_cast<double>(n) * central_binomial_scaled(n);
}

double normalized_total_1d(long long n_followers) {
  require_positive(n_followers, "N");
  // Pi_N = Pi_{N-1} (2N+1)/(2N), Pi_1 = 1/2.
  double pi = 0.5;
  for (long long i = 2; i <= n_followers; ++i) {
    pi *= static_cast<double>(2 * i + 1) / static_cast<double>(2 * i);
  }
  return pi;
}

double variance_2d(long long n, long long m) {
  require_positive(n, "n");
  require_positive(m, "m");
  // Antidiagonal-major accumulation: s = i + j ascending, each antidiagonal
  // swept outward from its peak with the exact step ratio ((j-1)/i)^2 for
  // (i,j) -> (i+1,j-1).
  CompensatedSum sum;
  for (long long s = 2; s <= n + m; ++s) {
    const long long i_lo = std::max<long long>(1, s - m);
    const long long i_hi = std::min(n, s - 1);
    const long long i_peak = std::clamp(s / 2, i_lo, i_hi);
    const double t_peak = term_2d_start(i_peak, s - i_peak);
    double t = t_peak;
    for (long long i = i_peak; i <= i_hi; ++i) {
      sum.add(t);
      if (t == 0.0) break;
      if (i < i_hi) {
        const double r = static_cast<double>(s - i - 1) / static_cast<double>(i);
        t *= r * r;
      }
    }
    t = t_peak;
    for (long long i = i_peak - 1; i >= i_lo; --i) {
      const double r = static_cast<double>(i) / static_cast<double>(s - i - 1);
      t *= r * r;
      sum.add(t);
      if (t == 0.0) break;
    }
  }
  return sum.value();
}

double variance_3d(long long n, long long m, long long l) {
  require_positive(n, "n");
  require_positive(m, "m");
  require_positive(l, "l");
  CompensatedSum sum;
  std::vector<double> row(static_cast<std::size_t>(l));
  for (long long i = 1; i <= n; ++i) {
    for (long long j = 1; j <= m; ++j) {
      fill_row_3d(row.data(), i, j, 1, l);
      for (long long k = 0; k < l; ++k) sum.add(row[static_cast<std::size_t>(k)]);
    }
  }
  return sum.value();
}

VarianceField variance_field(const LatticeSpec& spec) {
  spec.validate();
  const long long states = spec.state_count();
  if (states > kMaxFieldStates) {
    throw std::length_error("variance_field: " + std::to_string(states) +
                            " states exceeds the guard of " +
                            std::to_string(kMaxFieldStates));
  }
  VarianceField field{spec, std::vector<double>(static_cast<std::size_t>(states))};
  const long long N = spec.side;
  auto& v = field.values;

  switch (spec.dimension) {
    case 1: {
      double u = 1.0;
      CompensatedSum sum;
      for (long long k = 0; k < N; ++k) {
        if (k > 0) u *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
        sum.add(0.5 * u);
        v[static_cast<std::size_t>(k)] = sum.value();
      }
      break;
    }
    case 2: {
      // Summand grid, then in-place prefix sums along axis 2 and axis 1.
      for (long long i = 1; i <= N; ++i) {
        fill_row_2d(v.data() + static_cast<std::size_t>((i - 1) * N), i, 1, N);
      }
      for (std::size_t r = 0; r < static_cast<std::size_t>(N); ++r) {
        double* row = v.data() + r * static_cast<std::size_t>(N);
        for (long long j = 1; j < N; ++j) row[j] += row[j - 1];
      }
      for (long long i = 1; i < N; ++i) {
        double* row = v.data() + static_cast<std::size_t>(i * N);
        const double* prev = row - N;
        for (long long j = 0; j < N; ++j) row[j] += prev[j];
      }
      break;
    }
    default: {
      const std::size_t plane = static_cast<std::size_t>(N * N);
      for (long long i = 1; i <= N; ++i) {
        for (long long j = 1; j <= N; ++j) {
          fill_row_3d(v.data() + static_cast<std::size_t>(i - 1) * plane +
                          static_cast<std::size_t>((j - 1) * N),
                      i, j, 1, N);
        }
      }
      // Prefix along axis 3, then axis 2, then axis 1.
      for (std::size_t p = 0; p < static_cast<std::size_t>(N) * static_cast<std::size_t>(N);
           ++p) {
        double* line = v.data() + p * static_cast<std::size_t>(N);
        for (long long k = 1; k < N; ++k) line[k] += line[k - 1];
      }
      for (long long i = 0; i < N; ++i) {
        double* pl = v.data() + static_cast<std::size_t>(i) * plane;
        for (long long j = 1; j < N; ++j) {
          double* row = pl + static_cast<std::size_t>(j * N);
          const double* prev = row - N;
          for (long long k = 0; k < N; ++k) row[k] += prev[k];
        }
      }
      for (long long i = 1; i < N; ++i) {
        double* pl = v.data() + static_cast<std::size_t>(i) * plane;
        const double* prev = pl - plane;
        for (std::size_t q = 0; q < plane; ++q) pl[q] += prev[q];
      }
      break;
    }
  }
  return field;
}

std::vector<double> diagonal_variances_2d(long long n_max) {
  require_positive(n_max, "n_max");
  const std::size_t n = static_cast<std::size_t>(n_max);
  std::vector<double> term(n), colsum(n, 0.0), diag(n);
  for (long long i = 1; i <= n_max; ++i) {
    fill_row_2d(term.data(), i, 1, n_max);
    for (std::size_t j = 0; j < n; ++j) colsum[j] += term[j];
    CompensatedSum f;
    for (long long j = 0; j < i; ++j) f.add(colsum[static_cast<std::size_t>(j)]);
    diag[static_cast<std::size_t>(i - 1)] = f.value();
  }
  return diag;
}

std::vector<double> diagonal_variances_3d(long long n_max) {
  require_positive(n_max, "n_max");
  const std::size_t n = static_cast<std::size_t>(n_max);
  std::vector<double> term(n), acc(n * n, 0.0), diag(n);
  for (long long i = 1; i <= n_max; ++i) {
    for (long long j = 1; j <= n_max; ++j) {
      fill_row_3d(term.data(), i, j, 1, n_max);
      double* acc_row = acc.data() + static_cast<std::size_t>(j - 1) * n;
      for (std::size_t k = 0; k < n; ++k) acc_row[k] += term[k];
    }
    CompensatedSum f;
    for (long long j = 0; j < i; ++j) {
      const double* acc_row = acc.data() + static_cast<std::size_t>(j) * n;
      for (long long k = 0; k < i; ++k) f.add(acc_row[k]);
    }
    diag[static_cast<std::size_t>(i - 1)] = f.value();
  }
  return diag;
}

Rational variance_1d_exact(int n) {
  require_exact_index(n, "n");
  Rational sum = 0;
  for (int i = 1; i <= n; ++i) sum += exact_term_1d(i);
  return sum;
}

Rational variance_1d_exact_product(int n) {
  require_exact_index(n, "n");
  const unsigned un = static_cast<unsigned>(n);
  return Rational(BigInt(n) * factorial_exact(2 * un),
                  pow_exact(2, 2 * un) * factorial_exact(un) * factorial_exact(un));
}

Rational normalized_total_1d_exact(int n_followers) {
  require_exact_index(n_followers, "N");
  const unsigned un = static_cast<unsigned>(n_followers);
  return Rational(factorial_exact(2 * un + 1),
                  BigInt(3) * pow_exact(2, 2 * un) * factorial_exact(un) * factorial_exact(un));
}

Rational variance_2d_exact(int n, int m) {
  require_exact_index(n, "n");
  require_exact_index(m, "m");
  Rational sum = 0;
  Rational ti(1, 4);  // t(1,1)
  for (int i = 1; i <= n; ++i) {
    if (i > 1) ti *= term_ratio_2d_axis_exact(i, i - 1);
    Rational t = ti;
    for (int j = 1; j <= m; ++j) {
      if (j > 1) t *= term_ratio_2d_axis_exact(i + j - 1, j - 1);
      sum += t;
    }
  }
  return sum;
}

Rational variance_3d_exact(int n, int m, int l) {
  require_exact_index(n, "n");
  require_exact_index(m, "m");
  require_exact_index(l, "l");
  Rational sum = 0;
  Rational ti(1, 6);  // t(1,1,1)
  for (int i = 1; i <= n; ++i) {
    if (i > 1) ti *= term_ratio_3d_axis_exact(i + 1, i - 1);
    Rational tj = ti;
    for (int j = 1; j <= m; ++j) {
      if (j > 1) tj *= term_ratio_3d_axis_exact(i + j, j - 1);
      Rational t = tj;
      for (int k = 1; k <= l; ++k) {
        if (k > 1) t *= term_ratio_3d_axis_exact(i + j + k - 1, k - 1);
        sum += t;
      }
    }
  }
  return sum;
}

}  // namespace latvar
