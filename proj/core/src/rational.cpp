#include "latvar/rational.hpp"

#include <stdexcept>

namespace latvar {

BigInt factorial_exact(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial_exact(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;  // divides exactly: r is C(n, i+1) * (i+1)! / (i+1)! at each step
  }
  return r;
}

BigInt pow_exact(unsigned base, unsigned exponent) {
  BigInt r = 1;
  BigInt b = base;
  while (exponent != 0) {
    if (exponent & 1u) r *= b;
    b *= b;
    exponent >>= 1u;
  }
  return r;
}

BigInt trinomial_exact(unsigned n, unsigned a, unsigned b) {
  if (a + b > n) throw std::invalid_argument("trinomial_exact: a + b > n");
  return binomial_exact(n, a) * binomial_exact(n - a, b);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace latvar
