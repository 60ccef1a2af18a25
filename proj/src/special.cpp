#include "cdois/special.hpp"

#include "cdois/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cdois::special {

namespace {

// Terms below this fraction of the running sum are dropped.
constexpr double kRelNegligible = 1e-18;

}  // namespace

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double log_sub(double a, double b) {
    if (b == kNegInf) return a;
    if (b > a) throw DomainError("log_sub: result would be negative");
    if (b == a) return kNegInf;
    return a + std::log1p(-std::exp(b - a));
}

double log_poisson_pmf(double x, long n) {
    if (n < 0) return kNegInf;
    if (x == 0.0) return n == 0 ? 0.0 : kNegInf;
    return -x + static_cast<double>(n) * std::log(x) - std::lgamma(static_cast<double>(n) + 1.0);
}

double poisson_tail_bound(double x, long n) {
    if (x == 0.0) return 0.0;
    const double next = static_cast<double>(n) + 2.0;
    if (next <= x) return 1.0;
    // pmf(n+1) * sum_j (x / (n+2))^j
    return std::exp(log_poisson_pmf(x, n + 1)) / (1.0 - x / next);
}

double log_gamma_q(long n, double x) {
    if (n < 1) throw DomainError("log_gamma_q: order must be >= 1");
    if (!(x >= 0.0)) throw DomainError("log_gamma_q: argument must be >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return kNegInf;
    // Terms of sum_{k<n} x^k / k! in log space, scaled by the largest one.
    const long kmax = std::min(n - 1, static_cast<long>(std::floor(x)));
    const double lx = std::log(x);
    const double lpeak = static_cast<double>(kmax) * lx - std::lgamma(static_cast<double>(kmax) + 1.0);
    double sum = 0.0;
    double lt = lpeak;
    for (long k = kmax; k >= 0; --k) {
        const double t = std::exp(lt - lpeak);
        sum += t;
        if (t < kRelNegligible * sum) break;
        lt -= lx - std::log(static_cast<double>(k));
    }
    lt = lpeak;
    for (long k = kmax + 1; k < n; ++k) {
        lt += lx - std::log(static_cast<double>(k));
        const double t = std::exp(lt - lpeak);
        sum += t;
        if (t < kRelNegligible * sum) break;
    }
    return -x + lpeak + std::log(sum);
}

double log_gamma_p(long n, double x) {
    if (n < 1) throw DomainError("log_gamma_p: order must be >= 1");
    if (!(x >= 0.0)) throw DomainError("log_gamma_p: argument must be >= 0");
    if (x == 0.0) return kNegInf;
    if (std::isinf(x)) return 0.0;
    if (x > static_cast<double>(n)) {
        const double lq = log_gamma_q(n, x);
        return std::log1p(-std::exp(lq));
    }
    // Upper tail sum_{k>=n} x^k / k!, terms decrease from k = n.
    const double lx = std::log(x);
    const double lfirst = static_cast<double>(n) * lx - std::lgamma(static_cast<double>(n) + 1.0);
    double sum = 1.0;
    double ratio = 1.0;
    for (long k = n + 1;; ++k) {
        ratio *= x / static_cast<double>(k);
        sum += ratio;
        if (ratio < kRelNegligible * sum) break;
    }
    return -x + lfirst + std::log(sum);
}

}  // namespace cdois::special
