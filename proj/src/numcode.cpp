#include "mmlcost/numcode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmlcost {

namespace {

// Normalization constant of the universal integer code.
const double k_code_constant = std::log2(2.8665064);

const std::uint64_t k_denominator_cap = 1000000000000000ULL;  // 10^15

}  // namespace

double log_star(double n) {
  if (!(n > 0) || !std::isfinite(n)) {
    throw std::domain_error("log_star: argument must be positive and finite");
  }
  double sum = 0.0;
  double term = std::log2(n);
  while (term > 0.0) {
    sum += term;
    term = std::log2(term);
  }
  return sum;
}

Bits code_length(std::uint64_t n) {
  if (n == 0) {
    throw std::domain_error("code_length: argument must be >= 1");
  }
  return log_star(static_cast<double>(n)) + k_code_constant;
}

Bits code_length(const BigInt& n) {
  if (n <= 0) {
    throw std::domain_error("code_length: argument must be >= 1");
  }
  if (n == 1) {
    return k_code_constant;
  }
  return log_star(std::exp2(log2_bigint(n))) + k_code_constant;
}

Rational rational_approx(double x, double precision) {
  if (!std::isfinite(x) || x < 0) {
    throw std::domain_error("rational_approx: argument must be finite and >= 0");
  }
  if (!(precision >= 1e-15 && precision <= 1e-1)) {
    throw std::domain_error("rational_approx: precision out of range");
  }
  const BigInt cap(k_denominator_cap);
  // Convergent recurrence seeds: h_{-1}/k_{-1} and h_{-2}/k_{-2}.
  BigInt h_prev = 1, h_prev2 = 0;
  BigInt k_prev = 0, k_prev2 = 1;
  BigInt best_h = 0, best_k = 1;
  double best_err = std::numeric_limits<double>::infinity();
  double y = x;
  for (int i = 0; i < 80; ++i) {
    const double a_f = std::floor(y);
    const BigInt a(a_f);
    const BigInt h = a * h_prev + h_prev2;
    const BigInt k = a * k_prev + k_prev2;
    if (k > cap) {
      break;
    }
    const double err =
        std::fabs(x - h.convert_to<double>() / k.convert_to<double>());
    if (err < precision) {
      return Rational(h, k);
    }
    if (err < best_err) {
      best_err = err;
      best_h = h;
      best_k = k;
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = y - a_f;
    // The remaining fraction is at floating-point noise level; the current
    // convergent is as close as a double can express.
    if (frac < 1e-15) {
      break;
    }
    y = 1.0 / frac;
  }
  return Rational(best_h, best_k);
}

std::uint64_t euler_totient(std::uint64_t m) {
  if (m == 0) {
    throw std::domain_error("euler_totient: argument must be >= 1");
  }
  std::uint64_t result = m;
  std::uint64_t n = m;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      result -= result / p;
      while (n % p == 0) {
        n /= p;
      }
    }
  }
  if (n > 1) {
    result -= result / n;
  }
  return result;
}

Bits rational_cost(const Rational& r) {
  if (r.numerator() <= 0) {
    throw std::domain_error("rational_cost: rational must be positive");
  }
  const BigInt& den = r.denominator();
  if (den > BigInt(k_denominator_cap)) {
    throw std::domain_error("rational_cost: denominator too large");
  }
  const std::uint64_t q = den.convert_to<std::uint64_t>();
  return code_length(q) + std::log2(static_cast<double>(euler_totient(q)));
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    return 0;
  }
  if (k > n - k) {
    k = n - k;
  }
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= BigInt(n - k + i);
    result /= BigInt(i);
  }
  return result;
}

BigInt var_assignments(std::uint64_t d, std::uint64_t n_v) {
  if (n_v > d) {
    throw std::domain_error("var_assignments: more variables than positions");
  }
  if (n_v == 0) {
    return d == 0 ? BigInt(1) : BigInt(0);
  }
  // Inclusion-exclusion over the subsets of variables left unused.
  BigInt sum = 0;
  for (std::uint64_t i = 0; i <= n_v; ++i) {
    const BigInt term =
        binomial(n_v, i) * boost::multiprecision::pow(BigInt(n_v - i),
                                                      static_cast<unsigned>(d));
    if (i % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

Bits log2_factorial(std::uint64_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
}

Bits log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    throw std::domain_error("log2_binomial: k exceeds n");
  }
  return log2_factorial(n) - log2_factorial(k) - log2_factorial(n - k);
}

Bits log2_multinomial(const std::vector<std::uint64_t>& counts) {
  std::uint64_t total = 0;
  Bits denom = 0.0;
  for (std::uint64_t c : counts) {
    total += c;
    denom += log2_factorial(c);
  }
  return log2_factorial(total) - denom;
}

double log2_bigint(const BigInt& n) {
  if (n <= 0) {
    throw std::domain_error("log2_bigint: argument must be positive");
  }
  // Doubles hold 53 significant bits; shift larger values down first.
  const unsigned bits = boost::multiprecision::msb(n) + 1;
  if (bits <= 53) {
    return std::log2(n.convert_to<double>());
  }
  const unsigned shift = bits - 53;
  const BigInt top = n >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

double log2_rational(const Rational& r) {
  if (r.numerator() <= 0) {
    throw std::domain_error("log2_rational: rational must be positive");
  }
  return log2_bigint(r.numerator()) - log2_bigint(r.denominator());
}

}  // namespace mmlcost
