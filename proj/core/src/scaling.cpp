#include "latvar/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "latvar/closedform.hpp"
#include "latvar/combinatorics.hpp"
#include "latvar/summation.hpp"

namespace latvar {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLogSix = 1.791759469228055;
constexpr double kLogThree = 1.0986122886681098;

void require_positive(long long v, const char* name) {
  if (v < 1) {
    throw std::invalid_argument(std::string(name) + " must be >= 1, got " +
                                std::to_string(v));
  }
}

const double* factorial_table() {
  static const auto table = [] {
    static double t[171];
    t[0] = 1.0;
    for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table;
}

// f(i,j) = (2k)! / (4 * 4^{2k} (i! j!)^2), i + j = k. Exact factorial
// arithmetic for small k keeps the dyadic values bit-exact; log scale beyond.
double antidiagonal_term_2d(long long k, long long i) {
  if (2 * k <= 170) {
    const double* fact = factorial_table();
    const double den = fact[i] * fact[k - i];
    return fact[2 * k] / (4.0 * std::pow(4.0, static_cast<double>(2 * k))) / (den * den);
  }
  return std::exp(log_factorial(2 * k).value -
                  (2.0 * static_cast<double>(k) + 1.0) * std::log(4.0) -
                  2.0 * (log_factorial(i).value + log_factorial(k - i).value));
}

// g(i,j,k) = (2p)! / (6 * 6^{2p} (i! j! k!)^2), i + j + k = p.
double pyramid_term_3d(long long p, long long j, long long k) {
  if (2 * p <= 170) {
    const double* fact = factorial_table();
    const double den = fact[p - j - k] * fact[j] * fact[k];
    return fact[2 * p] / (6.0 * std::pow(6.0, static_cast<double>(2 * p))) / (den * den);
  }
  return std::exp(log_factorial(2 * p).value - kLogSix -
                  2.0 * static_cast<double>(p) * kLogSix -
                  2.0 * (log_factorial(p - j - k).value + log_factorial(j).value +
                         log_factorial(k).value));
}

// Fit of c in G_p ~ c p^{-3/2} over p in [50, 200], least squares through the
// origin against p^{-3/2}.
double fit_pyramid_constant(const std::vector<double>& u3d_series) {
  double num = 0.0;
  double den = 0.0;
  for (long long p = 50; p <= 200; ++p) {
    const double x = std::pow(static_cast<double>(p), -1.5);
    const double g = u3d_series[static_cast<std::size_t>(p)] / 6.0;
    num += g * x;
    den += x * x;
  }
  return num / den;
}

}  // namespace

std::pair<ConvergenceTable, ConvergenceTable> limit_check_1d(long long n_max) {
  if (n_max < 10) throw std::invalid_argument("limit_check_1d: n_max must be >= 10");

  std::vector<long long> marks;
  for (long long n = 1; n < n_max; n *= 2) marks.push_back(n);
  marks.push_back(n_max);

  ConvergenceTable variance_table;
  variance_table.limit = 1.0 / std::sqrt(kPi);
  ConvergenceTable total_table;
  total_table.limit = 2.0 / (3.0 * std::sqrt(kPi));

  CompensatedSum v;
  double u = 1.0;  // u_{2(n-1)}
  double pi_n = 0.5;
  std::size_t next_mark = 0;
  for (long long n = 1; n <= n_max; ++n) {
    if (n > 1) {
      u *= static_cast<double>(2 * n - 3) / static_cast<double>(2 * n - 2);
      pi_n *= static_cast<double>(2 * n + 1) / static_cast<double>(2 * n);
    }
    v.add(0.5 * u);
    if (next_mark < marks.size() && n == marks[next_mark]) {
      const double sqrt_n = std::sqrt(static_cast<double>(n));
      variance_table.index.push_back(n);
      variance_table.ratio.push_back(v.value() / sqrt_n);
      variance_table.deviation.push_back(std::abs(v.value() / sqrt_n - variance_table.limit));
      total_table.index.push_back(n);
      total_table.ratio.push_back(pi_n / sqrt_n);
      total_table.deviation.push_back(std::abs(pi_n / sqrt_n - total_table.limit));
      ++next_mark;
    }
  }
  return {std::move(variance_table), std::move(total_table)};
}

std::pair<double, double> antidiagonal_sum_2d(long long k) {
  if (k < 0) throw std::invalid_argument("antidiagonal_sum_2d: k must be >= 0");
  // Direct sweep of f(i, k-i) outward from the antidiagonal's largest entry,
  // step ratio f(i+1, j-1)/f(i, j) = (j/(i+1))^2. The edge entries underflow
  // long before the center does, so the sweep cannot start there.
  const long long i_start = k / 2;
  const double f0 = antidiagonal_term_2d(k, i_start);
  CompensatedSum direct;
  double f = f0;
  for (long long i = i_start; i <= k; ++i) {
    direct.add(f);
    if (i < k) {
      const double r = static_cast<double>(k - i) / static_cast<double>(i + 1);
      f *= r * r;
    }
  }
  f = f0;
  for (long long i = i_start; i >= 1; --i) {
    const double r = static_cast<double>(i) / static_cast<double>(k - i + 1);
    f *= r * r;
    direct.add(f);
  }
  const double closed = return_prob(2, k) / 4.0;
  return {direct.value(), closed};
}

double triangle_sum_2d(long long n) {
  require_positive(n, "n");
  CompensatedSum sum;
  double u1 = 1.0;
  for (long long k = 0; k < n; ++k) {
    if (k > 0) u1 *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
    sum.add(0.25 * u1 * u1);
  }
  return sum.value();
}

SandwichReport sandwich_2d(long long n) {
  require_positive(n, "n");
  return SandwichReport{n, triangle_sum_2d(n), variance_2d(n, n), triangle_sum_2d(2 * n)};
}

std::pair<double, double> pyramid_slice_sum_3d(long long p) {
  if (p < 0) throw std::invalid_argument("pyramid_slice_sum_3d: p must be >= 0");
  // Direct: sum of g over the triangle i+j+k=p, each row swept outward from
  // its largest entry.
  //   g(i,j,k) = (2p)! / (6 * 6^{2p} (i! j! k!)^2), i = p-j-k,
  //   step k -> k+1 at fixed j: ratio = (i / (k+1))^2.
  CompensatedSum direct;
  for (long long j = 0; j <= p; ++j) {
    const long long rem = p - j;
    const long long k_start = rem / 2;
    const double g0 = pyramid_term_3d(p, j, k_start);
    double g = g0;
    for (long long k = k_start; k <= rem; ++k) {
      direct.add(g);
      if (k < rem) {
        const double r = static_cast<double>(rem - k) / static_cast<double>(k + 1);
        g *= r * r;
      }
    }
    g = g0;
    for (long long k = k_start; k >= 1; --k) {
      const double r = static_cast<double>(k) / static_cast<double>(rem - k + 1);
      g *= r * r;
      direct.add(g);
    }
  }

  const auto series = return_prob_series(3, p);
  const double closed = series.values.back() / 6.0;
  return {direct.value(), closed};
}

double pyramid_slice_upper_bound_3d(long long p) {
  if (p < 0) throw std::invalid_argument("pyramid_slice_upper_bound_3d: p must be >= 0");
  const long long third = p / 3;
  const double log_balanced = log_factorial(p).value -
                              static_cast<double>(p) * kLogThree -
                              3.0 * log_factorial(third).value;
  return central_binomial_scaled(p) / 6.0 * std::exp(log_balanced);
}

TailBoundReport pyramid_sum_3d(long long n) {
  require_positive(n, "n");
  const long long series_len = std::max<long long>(n - 1, 200);
  const auto series = return_prob_series(3, series_len);

  CompensatedSum sum;
  for (long long k = 0; k < n; ++k) {
    sum.add(series.values[static_cast<std::size_t>(k)] / 6.0);
  }
  const double c = fit_pyramid_constant(series.values);
  const double tail = 2.0 * c / std::sqrt(static_cast<double>(std::max<long long>(n, 2) - 1));
  return TailBoundReport{n, sum.value(), tail, c};
}

SandwichReport sandwich_3d(long long n) {
  require_positive(n, "n");
  return SandwichReport{n, pyramid_sum_3d(n).value, variance_3d(n, n, n),
                        pyramid_sum_3d(2 * n).value};
}

double undirected_reference_1d(long long n) {
  require_positive(n, "n");
  return static_cast<double>(n) / 2.0;
}

FitResult fit_scaling(std::span<const long long> index, std::span<const double> value,
                      FitModel model, long long range_lo, long long range_hi) {
  if (index.size() != value.size()) {
    throw std::invalid_argument("fit_scaling: index/value size mismatch");
  }
  std::vector<double> xs, ys;
  long long lo_seen = std::numeric_limits<long long>::max();
  long long hi_seen = std::numeric_limits<long long>::min();
  for (std::size_t i = 0; i < index.size(); ++i) {
    const long long n = index[i];
    if (n < range_lo || n > range_hi) continue;
    if (n < 1) throw std::invalid_argument("fit_scaling: indices must be >= 1");
    const double y = value[i];
    switch (model) {
      case FitModel::log_fit:
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(y);
        break;
      case FitModel::sqrt_fit:
        xs.push_back(std::sqrt(static_cast<double>(n)));
        ys.push_back(y);
        break;
      case FitModel::power_fit:
        if (!(y > 0.0)) {
          throw std::invalid_argument("fit_scaling: power_fit needs positive values");
        }
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(y));
        break;
    }
    lo_seen = std::min(lo_seen, n);
    hi_seen = std::max(hi_seen, n);
  }
  const std::size_t m = xs.size();
  if (m < 3) throw std::invalid_argument("fit_scaling: need at least 3 points in range");

  const double x_min = *std::min_element(xs.begin(), xs.end());
  const double x_max = *std::max_element(xs.begin(), xs.end());
  if (x_max - x_min < 1e-12) {
    throw std::invalid_argument("fit_scaling: singular design (constant index set)");
  }

  FitResult fit;
  fit.model = model;
  fit.range_lo = lo_seen;
  fit.range_hi = hi_seen;

  if (model == FitModel::sqrt_fit) {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sxy += xs[i] * ys[i];
      sxx += xs[i] * xs[i];
    }
    fit.a = sxy / sxx;
    fit.b = 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = ys[i] - fit.a * xs[i];
      ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(m));
    return fit;
  }

  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - (slope * xs[i] + intercept);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(m));

  if (model == FitModel::log_fit) {
    fit.a = slope;
    fit.b = intercept;
  } else {
    fit.a = std::exp(intercept);
    fit.b = slope;  // exponent
  }
  return fit;
}

Rational antidiagonal_sum_2d_exact_direct(int k) {
  if (k < 0) throw std::invalid_argument("antidiagonal_sum_2d_exact_direct: k must be >= 0");
  const unsigned uk = static_cast<unsigned>(k);
  const BigInt pref_num = factorial_exact(2 * uk);
  const BigInt pref_den = BigInt(4) * pow_exact(4, 2 * uk);
  Rational sum = 0;
  for (unsigned i = 0; i <= uk; ++i) {
    const BigInt fij = factorial_exact(i) * factorial_exact(uk - i);
    sum += Rational(pref_num, pref_den * fij * fij);
  }
  return sum;
}

Rational antidiagonal_sum_2d_exact_closed(int k) {
  if (k < 0) throw std::invalid_argument("antidiagonal_sum_2d_exact_closed: k must be >= 0");
  const unsigned uk = static_cast<unsigned>(k);
  const BigInt c = binomial_exact(2 * uk, uk);
  return Rational(c * c, BigInt(4) * pow_exact(4, 2 * uk));
}

Rational pyramid_slice_sum_3d_exact_direct(int p) {
  if (p < 0) throw std::invalid_argument("pyramid_slice_sum_3d_exact_direct: p must be >= 0");
  const unsigned up = static_cast<unsigned>(p);
  const BigInt pref_num = factorial_exact(2 * up);
  const BigInt pref_den = BigInt(6) * pow_exact(6, 2 * up);
  Rational sum = 0;
  for (unsigned j = 0; j <= up; ++j) {
    for (unsigned k = 0; k + j <= up; ++k) {
      const BigInt fijk =
          factorial_exact(up - j - k) * factorial_exact(j) * factorial_exact(k);
      sum += Rational(pref_num, pref_den * fijk * fijk);
    }
  }
  return sum;
}

Rational pyramid_slice_sum_3d_exact_closed(int p) {
  return return_prob_exact(3, p) / 6;
}

}  // namespace latvar
