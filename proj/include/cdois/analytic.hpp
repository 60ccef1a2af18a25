/**
 * @file analytic.hpp
 * @brief Exact tranche pricing from the first-passage transform of the default process.
 *
 * With T_h the first time the cumulative default level D_t reaches h,
 *
 *   phi_r(h, M) = E[ exp(-r T_h) 1{T_h < M} ]
 *
 * has the closed form series
 *
 *   phi_r = q e^{-lambda h - s M} sum_{n>=1} (sM)^n / n! sum_{k<n} (lambda q h)^k / k!,
 *   s = rho + r,  q = rho / s,
 *
 * and both legs of a tranche follow from one-dimensional integrals of it over
 * the default level h in [ha, hd] with the weight e^{-h}.
 */

#pragma once

#include "cdois/model.hpp"

namespace cdois::analytic {

/// Truncation control shared by every series in the library.
struct SeriesControl {
    double abs_tol = 1e-12;  ///< bound on the neglected tail
    long max_terms = 4096;   ///< cap on the outer summation index

    void validate() const;
};

/// Quadrature control for the integrals over the default level.
struct QuadControl {
    double rel_tol = 1e-9;
    double h_cap = 36.0;  ///< replaces an infinite upper level; e^{-36} < 3e-16

    void validate() const;
};

/// Series evaluation result with the number of outer terms summed.
struct SeriesValue {
    double value;
    long terms;
};

/// Discounted first-passage transform phi_r(h, M) for h > 0, M >= 0, r >= 0.
SeriesValue phi_series(double h, double maturity, double rate, const ModelParams& params,
                       const SeriesControl& ctl = {});

inline double phi(double h, double maturity, double rate, const ModelParams& params,
                  const SeriesControl& ctl = {}) {
    return phi_series(h, maturity, rate, params, ctl).value;
}

/// P(T_h < M), evaluated independently of `phi` through incomplete gamma functions:
/// sum_n Pois(rho M, n) Q(n, lambda h).
double phi0(double h, double maturity, const ModelParams& params, const SeriesControl& ctl = {});

/// E[ 1{T_h < M} int_{T_h}^{M} e^{-r s} ds ], the discounted time spent at or
/// above level h before maturity. Regular at r = 0, where it is E (M - T_h)^+.
double discounted_shortfall(double h, double maturity, double rate, const ModelParams& params,
                            const SeriesControl& ctl = {});

/// Default leg present value: integral of phi_r(h, M) e^{-h} over [ha, hd].
double def_pv(const Tranche& tr, const Contract& c, const ModelParams& params,
              const SeriesControl& ctl = {}, const QuadControl& q = {});

/// Premium leg present value per unit running spread, continuous accrual.
///
/// Uses the three-term first-passage formula when r M is at least
/// `kShortfallRateThreshold`; below that the 1/r cancellation in that formula
/// is severe and the equivalent shortfall representation is used.
double prem_pv_1bp(const Tranche& tr, const Contract& c, const ModelParams& params,
                   const SeriesControl& ctl = {}, const QuadControl& q = {});

inline constexpr double kShortfallRateThreshold = 1e-3;

/// Premium leg from the three-term formula in phi_r and phi_0. Requires r > 0.
double prem_pv_1bp_first_passage(const Tranche& tr, const Contract& c, const ModelParams& params,
                                 const SeriesControl& ctl = {}, const QuadControl& q = {});

/// Premium leg as (1 - e^{-rM})/r (d - a) minus the integrated discounted
/// shortfall; at r = 0 this is M (d - a) - int E(M - T_h)^+ e^{-h} dh.
double prem_pv_1bp_shortfall(const Tranche& tr, const Contract& c, const ModelParams& params,
                             const SeriesControl& ctl = {}, const QuadControl& q = {});

struct TranchePrice {
    Tranche tranche;
    double def_pv;
    double prem_pv_1bp;

    double spread_bp() const { return fair_spread(def_pv, prem_pv_1bp); }
};

TranchePrice price(const Tranche& tr, const Contract& c, const ModelParams& params,
                   const SeriesControl& ctl = {}, const QuadControl& q = {});

}  // namespace cdois::analytic
