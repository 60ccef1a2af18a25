#include "cdois/analytic.hpp"

#include "cdois/errors.hpp"
#include "cdois/quadrature.hpp"
#include "cdois/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace cdois::analytic {

void SeriesControl::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("SeriesControl: abs_tol must be positive");
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
}

void QuadControl::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("QuadControl: rel_tol must be positive");
    if (!(h_cap > 0.0)) throw DomainError("QuadControl: h_cap must be positive");
}

namespace {

void check_point(double h, double maturity, double rate) {
    if (std::isnan(h) || h <= 0.0) throw DomainError("first-passage level h must be positive");
    if (!(maturity >= 0.0)) throw DomainError("maturity must be non-negative");
    if (!(rate >= 0.0) || std::isinf(rate)) throw DomainError("rate must be non-negative and finite");
}

[[noreturn]] void not_converged(const char* what, long terms) {
    throw ConvergenceError(std::string(what) + ": tail bound above tolerance after " +
                           std::to_string(terms) + " terms");
}

// Upper integration limit in default-level space.
double level_cap(const Tranche& tr, const QuadControl& q) { return std::min(tr.hd(), q.h_cap); }

}  // namespace

SeriesValue phi_series(double h, double maturity, double rate, const ModelParams& params,
                       const SeriesControl& ctl) {
    check_point(h, maturity, rate);
    ctl.validate();
    if (maturity == 0.0 || std::isinf(h)) return {0.0, 0};

    const double s = params.rho() + rate;
    const double q = params.rho() / s;
    const double x = s * maturity;
    const double y = params.lambda() * q * h;
    const double log_pref = std::log(q) - params.lambda() * h * (rate / s);
    const double pref = std::exp(log_pref);
    const double lx = std::log(x);
    const double ly = std::log(y);

    // sum_n Pois(x, n) * P(Pois(y) <= n - 1); both factors advance by one
    // term per n.
    double log_pmf_x = -x;  // n = 0
    double log_pmf_y = -y;  // k = 0
    double cdf_y = 0.0;
    double sum = 0.0;
    for (long n = 1; n <= ctl.max_terms; ++n) {
        log_pmf_x += lx - std::log(static_cast<double>(n));
        cdf_y += std::exp(log_pmf_y);
        log_pmf_y += ly - std::log(static_cast<double>(n));
        sum += std::exp(log_pmf_x) * cdf_y;
        if (pref * special::poisson_tail_bound(x, n) < ctl.abs_tol) {
            return {std::min(1.0, pref * sum), n};
        }
    }
    not_converged("phi", ctl.max_terms);
}

double phi0(double h, double maturity, const ModelParams& params, const SeriesControl& ctl) {
    check_point(h, maturity, 0.0);
    ctl.validate();
    if (maturity == 0.0 || std::isinf(h)) return 0.0;
    const double x = params.rho() * maturity;
    const double y = params.lambda() * h;
    double sum = 0.0;
    for (long n = 1; n <= ctl.max_terms; ++n) {
        const double pmf = std::exp(special::log_poisson_pmf(x, n));
        sum += pmf * boost::math::gamma_q(static_cast<double>(n), y);
        if (special::poisson_tail_bound(x, n) < ctl.abs_tol) return std::min(1.0, sum);
    }
    not_converged("phi0", ctl.max_terms);
}

double discounted_shortfall(double h, double maturity, double rate, const ModelParams& params,
                            const SeriesControl& ctl) {
    check_point(h, maturity, rate);
    ctl.validate();
    if (maturity == 0.0 || std::isinf(h)) return 0.0;
    const double s = params.rho() + rate;
    const double log_q = std::log(params.rho() / s);
    const double x = s * maturity;
    const double y = params.lambda() * h;
    const double ly = std::log(y);

    // term_n = q^n / s * P(n + 1, sM) * P(Pois(lambda h) <= n - 1)
    double log_pmf_y = -y;
    double cdf_y = 0.0;
    double sum = 0.0;
    for (long n = 1; n <= ctl.max_terms; ++n) {
        cdf_y += std::exp(log_pmf_y);
        log_pmf_y += ly - std::log(static_cast<double>(n));
        const double log_upper = special::log_gamma_p(n + 1, x);
        sum += std::exp(static_cast<double>(n) * log_q + log_upper) * cdf_y / s;
        if (maturity * special::poisson_tail_bound(x, n) < ctl.abs_tol) return sum;
    }
    not_converged("discounted_shortfall", ctl.max_terms);
}

double def_pv(const Tranche& tr, const Contract& c, const ModelParams& params,
              const SeriesControl& ctl, const QuadControl& q) {
    q.validate();
    const double hi = level_cap(tr, q);
    if (tr.degenerate() || tr.ha() >= hi) return 0.0;
    const double m = c.maturity();
    const double r = c.rate();
    return integrate([&](double h) { return phi(h, m, r, params, ctl) * std::exp(-h); }, tr.ha(),
                     hi, q.rel_tol);
}

double prem_pv_1bp_first_passage(const Tranche& tr, const Contract& c, const ModelParams& params,
                                 const SeriesControl& ctl, const QuadControl& q) {
    q.validate();
    const double r = c.rate();
    const double m = c.maturity();
    if (!(r > 0.0)) throw DomainError("prem_pv_1bp_first_passage: rate must be positive");
    const double annuity = -std::expm1(-r * m) / r;
    const double hi = level_cap(tr, q);
    if (tr.degenerate()) return 0.0;
    if (tr.ha() >= hi) return annuity * tr.width();

    // The two series enter as a difference divided by r; truncate each well
    // below abs_tol * r so the quotient keeps the requested accuracy.
    SeriesControl tight = ctl;
    tight.abs_tol = ctl.abs_tol * std::min(1.0, 0.5 * r);
    const double disc_m = std::exp(-r * m);
    const double correction = integrate(
        [&](double h) {
            const double undiscounted = phi(h, m, 0.0, params, tight);
            const double discounted = phi(h, m, r, params, tight);
            return (disc_m * undiscounted - discounted) * std::exp(-h);
        },
        tr.ha(), hi, q.rel_tol);
    return annuity * tr.width() + correction / r;
}

double prem_pv_1bp_shortfall(const Tranche& tr, const Contract& c, const ModelParams& params,
                             const SeriesControl& ctl, const QuadControl& q) {
    q.validate();
    const double r = c.rate();
    const double m = c.maturity();
    const double annuity = r > 0.0 ? -std::expm1(-r * m) / r : m;
    const double hi = level_cap(tr, q);
    if (tr.degenerate()) return 0.0;
    if (tr.ha() >= hi) return annuity * tr.width();
    const double lost = integrate(
        [&](double h) { return discounted_shortfall(h, m, r, params, ctl) * std::exp(-h); },
        tr.ha(), hi, q.rel_tol);
    return annuity * tr.width() - lost;
}

double prem_pv_1bp(const Tranche& tr, const Contract& c, const ModelParams& params,
                   const SeriesControl& ctl, const QuadControl& q) {
    if (c.rate() * c.maturity() < kShortfallRateThreshold) {
        return prem_pv_1bp_shortfall(tr, c, params, ctl, q);
    }
    return prem_pv_1bp_first_passage(tr, c, params, ctl, q);
}

TranchePrice price(const Tranche& tr, const Contract& c, const ModelParams& params,
                   const SeriesControl& ctl, const QuadControl& q) {
    return {tr, def_pv(tr, c, params, ctl, q), prem_pv_1bp(tr, c, params, ctl, q)};
}

}  // namespace cdois::analytic
