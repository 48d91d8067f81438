#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <vector>

namespace mmlcost {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

// All code lengths are measured in bits.
using Bits = double;

// Sum of iterated base-2 logarithms of n, keeping strictly positive terms
// only.  log_star(1) = 0.
double log_star(double n);

// Universal code length of an integer n >= 1: log_star(n) + log2(c0) with
// the normalization constant c0 = 2.8665064.
Bits code_length(std::uint64_t n);
Bits code_length(const BigInt& n);

// Rational within `precision` of x: the first continued-fraction convergent
// inside the error bound.  Not necessarily the smallest such denominator
// (semiconvergents are never returned).  Requires x >= 0 and
// 1e-15 <= precision <= 1e-1.  Denominators are capped at 10^15; if no
// convergent below the cap satisfies the bound, the closest one found is
// returned.
Rational rational_approx(double x, double precision);

// Euler's totient.  Requires m >= 1.
std::uint64_t euler_totient(std::uint64_t m);

// Cost of transmitting a rational in lowest terms p/q:
// code_length(q) + log2(totient(q)).
Bits rational_cost(const Rational& r);

// Exact binomial coefficient.
BigInt binomial(std::uint64_t n, std::uint64_t k);

// Number of assignments of d argument positions onto exactly n_v distinct
// variables (surjections).  var_assignments(0, 0) = 1.  Requires n_v <= d
// unless both are zero.
BigInt var_assignments(std::uint64_t d, std::uint64_t n_v);

Bits log2_factorial(std::uint64_t n);
Bits log2_binomial(std::uint64_t n, std::uint64_t k);

// log2( (sum counts)! / prod(counts[i]!) ).
Bits log2_multinomial(const std::vector<std::uint64_t>& counts);

// log2 of a positive rational.
double log2_rational(const Rational& r);

// log2 of a positive big integer, exact to double rounding.
double log2_bigint(const BigInt& n);

}  // namespace mmlcost
