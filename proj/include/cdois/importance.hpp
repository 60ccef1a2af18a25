/**
 * @file importance.hpp
 * @brief Closed-form diagnostics of the measure change at zero interest rate.
 *
 * Paths are simulated under an altered parameter set (rho', lambda') and
 * reweighted by the likelihood ratio
 *
 *   R(n, D) = (rho lambda / (rho' lambda'))^n exp(-(rho - rho') M - (lambda - lambda') D)
 *
 * which depends on the path only through its jump count n and total default D.
 * The joint law of (N_M, D_M) is known in closed form, so the mean and the
 * second moment of the reweighted default leg reduce to sums of integrals
 * int_l^u e^{-nu h} h^{n-1} dh.
 */

#pragma once

#include "cdois/analytic.hpp"
#include "cdois/model.hpp"

#include <vector>

namespace cdois::importance {

using analytic::SeriesControl;

/// Real-world and simulation (altered) parameter sets.
struct MeasurePair {
    ModelParams real;
    ModelParams altered;

    bool identical() const { return real == altered; }
};

struct VarianceReport {
    double mean;                    ///< E(Xdef)
    double second_moment_weighted;  ///< E(R Xdef^2), +inf when divergent
    double variance_altered;        ///< var'(R Xdef), +inf when divergent
    bool finite;
    long terms_used;
};

/// Integrability of the reweighted second moment.
struct PhaseBoundary {
    bool finite;         ///< 2 lambda - lambda' > 0, i.e. mu' > mu / 2
    double margin;       ///< 2 lambda - lambda'
    bool linear_finite;  ///< 2 lambda - lambda' + 1 > 0 (the e^{-h}-weighted term)
    double linear_margin;
};

/// log R(n, D); finite for all valid inputs.
double log_rn_weight(long n_jumps, double total_default, double maturity, const MeasurePair& mp);

/// R(n, D) = dP/dP' of a path with n jumps totalling D.
double rn_weight(long n_jumps, double total_default, double maturity, const MeasurePair& mp);

/// Density of (N_M = n, D_M in dh) for n >= 1, h > 0. Defective: the atom at
/// D = 0 carries mass e^{-rho M}.
double joint_density(long n, double h, double maturity, const ModelParams& params);

/// log of int_l^u e^{-nu h} h^{n-1} dh; -inf for an empty range, +inf when the
/// integral diverges (u = inf with nu <= 0).
double log_gamma_slice(long n, double nu, double lo, double hi);

/// int_l^u e^{-nu h} h^{n-1} dh, n >= 1, 0 <= l <= u <= inf. Divergence is
/// reported as +inf, not as an error.
double gamma_slice(long n, double nu, double lo, double hi);

/// E(Xdef) at r = 0 from the joint density.
double expected_def(const Tranche& tr, double maturity, const ModelParams& params,
                    const SeriesControl& ctl = {});

/// E(R Xdef^2) under the real measure, +inf when it diverges.
double weighted_second_moment(const Tranche& tr, double maturity, const MeasurePair& mp,
                              const SeriesControl& ctl = {});

/// Partial sums S_1..S_N of the series for E(R Xdef^2). Entries are +inf
/// when the per-term integrals diverge.
std::vector<double> weighted_second_moment_partial_sums(const Tranche& tr, double maturity,
                                                        const MeasurePair& mp, long n_terms);

/// Mean, weighted second moment and var'(R Xdef) = E(R Xdef^2) - E(Xdef)^2.
VarianceReport variance_report(const Tranche& tr, double maturity, const MeasurePair& mp,
                               const SeriesControl& ctl = {});

PhaseBoundary phase_boundary(const MeasurePair& mp);

}  // namespace cdois::importance
