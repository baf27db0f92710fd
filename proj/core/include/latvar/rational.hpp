#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace latvar {

/// Arbitrary-precision integers and rationals used as exact oracles for the
/// factorial/binomial formulas. cpp_rational keeps lowest terms and a positive
/// denominator by construction.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

[[nodiscard]] BigInt factorial_exact(unsigned n);
[[nodiscard]] BigInt binomial_exact(unsigned n, unsigned k);

/// 2^e and similar small-base powers as BigInt.
[[nodiscard]] BigInt pow_exact(unsigned base, unsigned exponent);

/// n! / (a! b! c!) with a + b + c == n.
[[nodiscard]] BigInt trinomial_exact(unsigned n, unsigned a, unsigned b);

[[nodiscard]] double to_double(const Rational& q);

}  // namespace latvar
