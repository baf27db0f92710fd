#include "latvar/combinatorics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "latvar/summation.hpp"

namespace latvar {
namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2*pi)
constexpr double kLogThree = 1.0986122886681098;
constexpr double kPi = 3.141592653589793238462643383279502884;

constexpr int kLogFactorialTableSize = 1024;

const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int n = 1; n < kLogFactorialTableSize; ++n) {
      acc += std::log(static_cast<long double>(n));
      t[n] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

double log_factorial_value(long long n) {
  if (n < kLogFactorialTableSize) return log_factorial_table()[static_cast<size_t>(n)];
  // Stirling series; the n^-7 term is below 1e-24 here.
  const double x = static_cast<double>(n);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x + 0.5) * std::log(x) - x + 0.5 * kLogTwoPi +
         inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0)));
}

// u_{2k} in 1D by the term ratio, exact start at u_0 = 1.
double central_binomial_scaled_recurrence(long long k) {
  double u = 1.0;
  for (long long i = 1; i <= k; ++i) {
    u *= static_cast<double>(2 * i - 1) / static_cast<double>(2 * i);
  }
  return u;
}

// ln u_{2k} = -ln(pi k)/2 - 1/(8k) + 1/(192 k^3) - 1/(640 k^5) + O(k^-7).
// Combining the Stirling expansions analytically avoids the catastrophic
// cancellation of subtracting O(k log k) log-factorials.
double central_binomial_scaled_asymptotic(long long k) {
  const double x = static_cast<double>(k);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double log_u = -0.5 * std::log(kPi * x) +
                       inv * (-0.125 + inv2 * (1.0 / 192.0 - inv2 * (1.0 / 640.0)));
  return std::exp(log_u);
}

// Squared-trinomial sum q(p) = sum_{j+k<=p} (p! / (3^p j! k! (p-j-k)!))^2,
// so that the 3D u_{2p} equals u_{2p}(1D) * q(p). Each row is generated from
// its largest entry outward; starting at the row edge underflows for large p.
double squared_trinomial_sum_direct(long long p) {
  if (p == 0) return 1.0;
  const double log_p_factorial = log_factorial_value(p);
  CompensatedSum total;
  for (long long j = 0; j <= p; ++j) {
    const long long rem = p - j;
    const long long k_start = rem / 2;
    const double log_m0 = log_p_factorial - static_cast<double>(p) * kLogThree -
                          log_factorial_value(j) - log_factorial_value(k_start) -
                          log_factorial_value(rem - k_start);
    const double m0 = std::exp(log_m0);
    double m = m0;
    for (long long k = k_start; k <= rem; ++k) {
      total.add(m * m);
      if (k < rem) m *= static_cast<double>(rem - k) / static_cast<double>(k + 1);
    }
    m = m0;
    for (long long k = k_start; k >= 1; --k) {
      m *= static_cast<double>(k) / static_cast<double>(rem - k + 1);
      total.add(m * m);
    }
  }
  return total.value();
}

void require_dimension(int dimension) {
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("dimension must be 1, 2 or 3, got " +
                                std::to_string(dimension));
  }
}

}  // namespace

double LogScale::exp() const { return std::exp(value); }

LogScale log_factorial(long long n) {
  if (n < 0) throw std::invalid_argument("log_factorial: n must be >= 0");
  return LogScale{log_factorial_value(n)};
}

double central_binomial_scaled(long long k) {
  if (k < 0) throw std::invalid_argument("central_binomial_scaled: k must be >= 0");
  if (k < 64) return central_binomial_scaled_recurrence(k);
  return central_binomial_scaled_asymptotic(k);
}

double return_prob(int dimension, long long k) {
  require_dimension(dimension);
  if (k < 0) throw std::invalid_argument("return_prob: k must be >= 0");
  switch (dimension) {
    case 1:
      return central_binomial_scaled(k);
    case 2: {
      const double u = central_binomial_scaled(k);
      return u * u;
    }
    default:
      return central_binomial_scaled(k) * squared_trinomial_sum_direct(k);
  }
}

ReturnProbSeries return_prob_series(int dimension, long long max_k) {
  require_dimension(dimension);
  if (max_k < 0) throw std::invalid_argument("return_prob_series: max_k must be >= 0");
  ReturnProbSeries series;
  series.dimension = dimension;
  series.values.reserve(static_cast<size_t>(max_k) + 1);

  double u1 = 1.0;  // 1D value, advanced by the ratio recurrence
  // q(k) for 3D, advanced by (k+1)^2 q(k+1) = ((10k^2+10k+3) q(k) - k^2 q(k-1))/9.
  double q_prev = 1.0;
  double q = 1.0 / 3.0;

  for (long long k = 0; k <= max_k; ++k) {
    if (k > 0) u1 *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
    switch (dimension) {
      case 1:
        series.values.push_back(u1);
        break;
      case 2:
        series.values.push_back(u1 * u1);
        break;
      default: {
        double qk;
        if (k == 0) {
          qk = 1.0;
        } else if (k == 1) {
          qk = q;
        } else {
          const double n = static_cast<double>(k - 1);
          const double next = ((10.0 * n * n + 10.0 * n + 3.0) * q - n * n * q_prev) /
                              (9.0 * (n + 1.0) * (n + 1.0));
          q_prev = q;
          q = next;
          qk = q;
        }
        series.values.push_back(u1 * qk);
        break;
      }
    }
  }
  return series;
}

Rational exact_term_1d(int i) {
  if (i < 1 || i > 64) {
    throw std::invalid_argument("exact_term_1d: i must be in [1, 64], got " +
                                std::to_string(i));
  }
  const unsigned m = static_cast<unsigned>(i - 1);
  const BigInt numerator = factorial_exact(2 * m);
  const BigInt denominator = 2 * pow_exact(2, 2 * m) * factorial_exact(m) * factorial_exact(m);
  return Rational(numerator, denominator);
}

Rational central_binomial_scaled_exact(int k) {
  if (k < 0) throw std::invalid_argument("central_binomial_scaled_exact: k must be >= 0");
  const unsigned uk = static_cast<unsigned>(k);
  return Rational(binomial_exact(2 * uk, uk), pow_exact(2, 2 * uk));
}

Rational return_prob_exact(int dimension, int k) {
  require_dimension(dimension);
  if (k < 0) throw std::invalid_argument("return_prob_exact: k must be >= 0");
  const Rational u1 = central_binomial_scaled_exact(k);
  switch (dimension) {
    case 1:
      return u1;
    case 2:
      return u1 * u1;
    default: {
      const unsigned p = static_cast<unsigned>(k);
      BigInt sum_sq = 0;
      for (unsigned j = 0; j <= p; ++j) {
        for (unsigned kk = 0; kk + j <= p; ++kk) {
          const BigInt t = trinomial_exact(p, j, kk);
          sum_sq += t * t;
        }
      }
      return u1 * Rational(sum_sq, pow_exact(9, p));
    }
  }
}

}  // namespace latvar
