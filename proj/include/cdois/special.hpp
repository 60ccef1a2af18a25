/**
 * @file special.hpp
 * @brief Poisson probabilities and integer-order incomplete gamma functions in log space.
 *
 * For integer order n the regularized incomplete gamma functions are Poisson
 * tail probabilities: Q(n, x) = P(Pois(x) <= n-1) and P(n, x) = P(Pois(x) >= n).
 * Everything here works with logarithms so that neither e^{-x} nor x^k / k!
 * overflows or underflows for the parameter ranges used by the pricers.
 */

#pragma once

#include <limits>

namespace cdois::special {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log of e^{-x} x^n / n!, x >= 0.
double log_poisson_pmf(double x, long n);

/// Upper bound on P(Pois(x) > n) (the tail beyond n), valid for any n >= 0.
double poisson_tail_bound(double x, long n);

/// log Q(n, x), n >= 1, x >= 0.
double log_gamma_q(long n, double x);

/// log P(n, x), n >= 1, x >= 0; -inf at x == 0.
double log_gamma_p(long n, double x);

/// log(e^a + e^b) without overflow; handles -inf operands.
double log_add(double a, double b);

/// log(e^a - e^b) for a >= b; -inf when equal.
double log_sub(double a, double b);

}  // namespace cdois::special
