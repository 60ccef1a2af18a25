#include "cdois/importance.hpp"

#include "cdois/errors.hpp"
#include "cdois/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace cdois::importance {

using special::kInf;
using special::kNegInf;

namespace {

// One h-integral family of the form weight * int_lo^hi e^{-nu h} h^{n-1} dh.
struct SliceTerm {
    double weight;
    double nu;
    double lo;
    double hi;
};

// Tail bound for sum_{n>N} coef_n * int_lo^hi e^{-nu h} h^{n-1} dh with
// coef_n = exp(log_c0) * kappa^n / (n! (n-1)!).
//
// Infinite range (nu > 0): int <= (n-1)!/nu^n, so the terms are bounded by
// exp(log_c0 + kappa/nu) Pois(kappa/nu, n).
// Finite range: int <= e^{max(0,-nu) hi} hi^n / n, so the terms are bounded by
// exp(log_c0 + max(0,-nu) hi + kappa hi) Pois(kappa hi, n).
double slice_tail_bound(const SliceTerm& t, double log_c0, double kappa, long n_done) {
    if (t.weight == 0.0 || t.lo >= t.hi) return 0.0;
    if (std::isinf(t.hi)) {
        const double mean = kappa / t.nu;
        return std::abs(t.weight) * std::exp(log_c0 + mean) * special::poisson_tail_bound(mean, n_done);
    }
    const double mean = kappa * t.hi;
    const double grow = std::max(0.0, -t.nu) * t.hi;
    return std::abs(t.weight) * std::exp(log_c0 + grow + mean) *
           special::poisson_tail_bound(mean, n_done);
}

bool slice_diverges(const SliceTerm& t) {
    return t.weight != 0.0 && t.lo < t.hi && std::isinf(t.hi) && t.nu <= 0.0;
}

// sum_{n>=1} exp(log_c0) kappa^n / (n!(n-1)!) * sum_j w_j int e^{-nu_j h} h^{n-1} dh
template <std::size_t K>
analytic::SeriesValue slice_series(const std::array<SliceTerm, K>& terms, double log_c0,
                                   double kappa, const SeriesControl& ctl) {
    ctl.validate();
    for (const auto& t : terms) {
        if (slice_diverges(t)) return {kInf, 0};
    }
    const double log_kappa = std::log(kappa);
    double sum = 0.0;
    for (long n = 1; n <= ctl.max_terms; ++n) {
        const double nd = static_cast<double>(n);
        const double log_coef = log_c0 + nd * log_kappa - std::lgamma(nd + 1.0) - std::lgamma(nd);
        for (const auto& t : terms) {
            if (t.weight == 0.0 || t.lo >= t.hi) continue;
            sum += t.weight * std::exp(log_coef + log_gamma_slice(n, t.nu, t.lo, t.hi));
        }
        double tail = 0.0;
        for (const auto& t : terms) tail += slice_tail_bound(t, log_c0, kappa, n);
        if (tail < ctl.abs_tol) return {sum, n};
    }
    throw ConvergenceError("slice series: tail bound above tolerance after " +
                           std::to_string(ctl.max_terms) + " terms");
}

// Default-leg payoff X(h) = (1 - a - e^{-h}) on [ha, hd) and (d - a) beyond,
// expanded into slices against a density with decay nu in h.
std::array<SliceTerm, 3> mean_slices(const Tranche& tr, double nu) {
    return {{{1.0 - tr.attach(), nu, tr.ha(), tr.hd()},
             {-1.0, nu + 1.0, tr.ha(), tr.hd()},
             {tr.width(), nu, tr.hd(), kInf}}};
}

std::array<SliceTerm, 4> square_slices(const Tranche& tr, double nu) {
    const double one_minus_a = 1.0 - tr.attach();
    return {{{1.0, nu + 2.0, tr.ha(), tr.hd()},
             {-2.0 * one_minus_a, nu + 1.0, tr.ha(), tr.hd()},
             {one_minus_a * one_minus_a, nu, tr.ha(), tr.hd()},
             {tr.width() * tr.width(), nu, tr.hd(), kInf}}};
}

// R f = exp(-(2 rho - rho') M) kappa^n h^{n-1} e^{-(2 lambda - lambda') h} / (n!(n-1)!)
struct ReweightedDensity {
    double log_c0;
    double kappa;
    double nu;
};

ReweightedDensity reweighted_density(double maturity, const MeasurePair& mp) {
    const double rho = mp.real.rho();
    const double lam = mp.real.lambda();
    const double rho_alt = mp.altered.rho();
    const double lam_alt = mp.altered.lambda();
    return {-(2.0 * rho - rho_alt) * maturity, rho * rho * lam * lam * maturity / (rho_alt * lam_alt),
            2.0 * lam - lam_alt};
}

void check_maturity(double maturity) {
    if (!(maturity > 0.0) || std::isinf(maturity)) {
        throw DomainError("maturity must be positive and finite");
    }
}

analytic::SeriesValue second_moment_series(const Tranche& tr, double maturity,
                                           const MeasurePair& mp, const SeriesControl& ctl) {
    check_maturity(maturity);
    if (tr.degenerate()) return {0.0, 0};
    const auto rd = reweighted_density(maturity, mp);
    return slice_series(square_slices(tr, rd.nu), rd.log_c0, rd.kappa, ctl);
}

// log int_l^u e^{w h} h^{n-1} dh for w > 0 and finite u, by expanding e^{w h}.
double log_growing_slice(long n, double w, double lo, double hi) {
    const double lw = std::log(w);
    const double lhi = std::log(hi);
    const double ratio = lo / hi;
    double acc = kNegInf;
    for (long j = 0;; ++j) {
        const double m = static_cast<double>(n + j);
        const double span = lo > 0.0 ? std::log1p(-std::pow(ratio, m)) : 0.0;
        const double lt = static_cast<double>(j) * lw - std::lgamma(static_cast<double>(j) + 1.0) +
                          m * lhi + span - std::log(m);
        acc = special::log_add(acc, lt);
        if (static_cast<double>(j) > w * hi && lt < acc - 40.0) break;
    }
    return acc;
}

}  // namespace

double log_rn_weight(long n_jumps, double total_default, double maturity, const MeasurePair& mp) {
    if (n_jumps < 0) throw DomainError("rn_weight: jump count must be non-negative");
    if (!(total_default >= 0.0) || std::isinf(total_default)) {
        throw DomainError("rn_weight: total default must be non-negative and finite");
    }
    if (n_jumps == 0 && total_default != 0.0) {
        throw DomainError("rn_weight: a path without jumps has zero total default");
    }
    if (!(maturity >= 0.0)) throw DomainError("rn_weight: maturity must be non-negative");
    const double per_jump = std::log(mp.real.rho() * mp.real.lambda()) -
                            std::log(mp.altered.rho() * mp.altered.lambda());
    return static_cast<double>(n_jumps) * per_jump -
           (mp.real.rho() - mp.altered.rho()) * maturity -
           (mp.real.lambda() - mp.altered.lambda()) * total_default;
}

double rn_weight(long n_jumps, double total_default, double maturity, const MeasurePair& mp) {
    return std::exp(log_rn_weight(n_jumps, total_default, maturity, mp));
}

double joint_density(long n, double h, double maturity, const ModelParams& params) {
    if (n < 1) throw DomainError("joint_density: jump count must be >= 1");
    if (!(h >= 0.0)) throw DomainError("joint_density: level must be non-negative");
    if (!(maturity >= 0.0)) throw DomainError("joint_density: maturity must be non-negative");
    if (std::isinf(h) || maturity == 0.0) return 0.0;
    if (h == 0.0 && n > 1) return 0.0;
    const double nd = static_cast<double>(n);
    const double rho_m = params.rho() * maturity;
    const double log_h_term = n > 1 ? (nd - 1.0) * std::log(h) : 0.0;
    return std::exp(-params.lambda() * h - rho_m + nd * std::log(rho_m * params.lambda()) +
                    log_h_term - std::lgamma(nd + 1.0) - std::lgamma(nd));
}

double log_gamma_slice(long n, double nu, double lo, double hi) {
    if (n < 1) throw DomainError("gamma_slice: order must be >= 1");
    if (std::isnan(nu) || std::isinf(nu)) throw DomainError("gamma_slice: decay rate must be finite");
    if (!(lo >= 0.0) || std::isinf(lo)) throw DomainError("gamma_slice: lower limit must be finite and >= 0");
    if (!(hi >= lo)) throw DomainError("gamma_slice: upper limit below lower limit");
    if (lo == hi) return kNegInf;
    const double nd = static_cast<double>(n);
    if (std::isinf(hi)) {
        if (nu <= 0.0) return kInf;
        return std::lgamma(nd) - nd * std::log(nu) + special::log_gamma_q(n, nu * lo);
    }
    if (nu > 0.0) {
        const double scale = std::lgamma(nd) - nd * std::log(nu);
        const double xl = nu * lo;
        const double xu = nu * hi;
        if (xl >= nd) {
            return scale + special::log_sub(special::log_gamma_q(n, xl), special::log_gamma_q(n, xu));
        }
        return scale + special::log_sub(special::log_gamma_p(n, xu), special::log_gamma_p(n, xl));
    }
    if (nu == 0.0) {
        const double span = lo > 0.0 ? std::log1p(-std::pow(lo / hi, nd)) : 0.0;
        return nd * std::log(hi) + span - std::log(nd);
    }
    return log_growing_slice(n, -nu, lo, hi);
}

double gamma_slice(long n, double nu, double lo, double hi) {
    return std::exp(log_gamma_slice(n, nu, lo, hi));
}

double expected_def(const Tranche& tr, double maturity, const ModelParams& params,
                    const SeriesControl& ctl) {
    check_maturity(maturity);
    if (tr.degenerate()) return 0.0;
    const double lam = params.lambda();
    const double rho_m = params.rho() * maturity;
    // f(n, h) = e^{-rho M} (rho M lambda)^n h^{n-1} e^{-lambda h} / (n!(n-1)!)
    return slice_series(mean_slices(tr, lam), -rho_m, rho_m * lam, ctl).value;
}

double weighted_second_moment(const Tranche& tr, double maturity, const MeasurePair& mp,
                              const SeriesControl& ctl) {
    return second_moment_series(tr, maturity, mp, ctl).value;
}

std::vector<double> weighted_second_moment_partial_sums(const Tranche& tr, double maturity,
                                                        const MeasurePair& mp, long n_terms) {
    check_maturity(maturity);
    if (n_terms < 1) throw DomainError("partial sums: need at least one term");
    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(n_terms));
    if (tr.degenerate()) {
        sums.assign(static_cast<std::size_t>(n_terms), 0.0);
        return sums;
    }
    const auto rd = reweighted_density(maturity, mp);
    const auto terms = square_slices(tr, rd.nu);
    for (const auto& t : terms) {
        if (slice_diverges(t)) {
            sums.assign(static_cast<std::size_t>(n_terms), kInf);
            return sums;
        }
    }
    const double log_kappa = std::log(rd.kappa);
    double sum = 0.0;
    for (long n = 1; n <= n_terms; ++n) {
        const double nd = static_cast<double>(n);
        const double log_coef = rd.log_c0 + nd * log_kappa - std::lgamma(nd + 1.0) - std::lgamma(nd);
        for (const auto& t : terms) {
            if (t.weight == 0.0 || t.lo >= t.hi) continue;
            sum += t.weight * std::exp(log_coef + log_gamma_slice(n, t.nu, t.lo, t.hi));
        }
        sums.push_back(sum);
    }
    return sums;
}

VarianceReport variance_report(const Tranche& tr, double maturity, const MeasurePair& mp,
                               const SeriesControl& ctl) {
    check_maturity(maturity);
    VarianceReport rep{};
    rep.mean = expected_def(tr, maturity, mp.real, ctl);
    const auto second = second_moment_series(tr, maturity, mp, ctl);
    rep.second_moment_weighted = second.value;
    rep.terms_used = second.terms;
    rep.finite = std::isfinite(second.value);
    if (!rep.finite) {
        rep.variance_altered = kInf;
        return rep;
    }
    // Clamp rounding-level negatives; the exact value is non-negative.
    rep.variance_altered = std::max(0.0, second.value - rep.mean * rep.mean);
    return rep;
}

PhaseBoundary phase_boundary(const MeasurePair& mp) {
    const double margin = 2.0 * mp.real.lambda() - mp.altered.lambda();
    return {margin > 0.0, margin, margin + 1.0 > 0.0, margin + 1.0};
}

}  // namespace cdois::importance
