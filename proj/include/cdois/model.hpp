/**
 * @file model.hpp
 * @brief Domain types of the compound Poisson loss model and tranche cashflow arithmetic.
 *
 * All quantities are fractions of the total portfolio notional. Conversion to
 * basis points happens only at reporting time (see `to_bp`).
 */

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cdois {

inline constexpr double kBasisPoint = 1e-4;

inline double to_bp(double fraction) { return fraction / kBasisPoint; }

/// Default intensity and jump-size law of the compound Poisson default process.
///
/// Events arrive at rate `rho` per year, each adding an exponential jump with
/// rate `lambda` (mean `mu() == 1 / lambda`) to the cumulative default level.
class ModelParams {
public:
    ModelParams(double rho, double lambda);

    /// Construct from the mean jump size instead of its rate.
    static ModelParams from_mean_jump(double rho, double mu) { return {rho, 1.0 / mu}; }

    double rho() const noexcept { return rho_; }
    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return 1.0 / lambda_; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double rho_;
    double lambda_;
};

/// Maturity, flat continuously-compounded rate, and payment grid density.
/// A zero maturity is accepted by the analytic pricer; simulation needs M > 0.
class Contract {
public:
    Contract(double maturity, double rate, int periods_per_year = 4);

    double maturity() const noexcept { return maturity_; }
    double rate() const noexcept { return rate_; }
    int periods_per_year() const noexcept { return periods_per_year_; }

    /// Number of payment periods k_max on the equally spaced grid (at least 1).
    int grid_steps() const noexcept;
    double grid_step() const noexcept { return maturity_ / grid_steps(); }

    friend bool operator==(const Contract&, const Contract&) = default;

private:
    double maturity_;
    double rate_;
    int periods_per_year_;
};

/// Attachment/detachment pair with the matching default-level thresholds.
///
/// `ha()`/`hd()` are the levels of the cumulative default process D at which the
/// exponential-specification loss crosses a and d. `hd()` is +inf for d == 1.
/// a == d is accepted and describes an empty tranche.
class Tranche {
public:
    Tranche(double attach, double detach);

    double attach() const noexcept { return a_; }
    double detach() const noexcept { return d_; }
    double width() const noexcept { return d_ - a_; }
    double ha() const noexcept { return ha_; }
    double hd() const noexcept { return hd_; }
    bool degenerate() const noexcept { return d_ == a_; }

    std::string label() const;

    friend bool operator==(const Tranche& x, const Tranche& y) { return x.a_ == y.a_ && x.d_ == y.d_; }

private:
    double a_;
    double d_;
    double ha_;
    double hd_;
};

/// Mapping from the cumulative default level D_t to the portfolio loss L_t.
enum class LossSpec {
    Exponential,  ///< L = 1 - exp(-D)
    Linear,       ///< L = min(D, 1)
};

std::string to_string(LossSpec spec);
LossSpec loss_spec_from_string(const std::string& name);

/// -ln(1 - x) for x in [0, 1]; +inf at x == 1.
double log_level(double x);

/// Portfolio loss fraction for cumulative default level D >= 0 (D may be +inf).
double loss_from_default(double default_level, LossSpec spec = LossSpec::Exponential);

/// min(L, d) - min(L, a)
double tranche_loss(double loss, const Tranche& tr);

/// Remaining tranche width (d - a) - tranche_loss(L).
double outstanding_notional(double loss, const Tranche& tr);

/// Break-even running spread in basis points for zero upfront.
double fair_spread(double def_pv, double prem_pv_1bp);

/// Standard tranche set: equity, two mezzanine, three senior slices, super senior, index.
std::vector<Tranche> standard_tranches();

}  // namespace cdois
