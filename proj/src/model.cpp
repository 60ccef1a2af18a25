#include "cdois/model.hpp"

#include "cdois/errors.hpp"

#include <algorithm>
#include <cstdio>

namespace cdois {

ModelParams::ModelParams(double rho, double lambda) : rho_(rho), lambda_(lambda) {
    if (!(std::isfinite(rho) && rho > 0.0)) {
        throw DomainError("ModelParams: intensity rho must be positive and finite");
    }
    if (!(std::isfinite(lambda) && lambda > 0.0)) {
        throw DomainError("ModelParams: jump rate lambda must be positive and finite");
    }
}

Contract::Contract(double maturity, double rate, int periods_per_year)
    : maturity_(maturity), rate_(rate), periods_per_year_(periods_per_year) {
    if (!(std::isfinite(maturity) && maturity >= 0.0)) {
        throw DomainError("Contract: maturity must be non-negative and finite");
    }
    if (!(std::isfinite(rate) && rate >= 0.0)) {
        throw DomainError("Contract: rate must be non-negative and finite");
    }
    if (periods_per_year < 1) {
        throw DomainError("Contract: periods_per_year must be at least 1");
    }
}

int Contract::grid_steps() const noexcept {
    const double k = std::round(maturity_ * periods_per_year_);
    return std::max(1, static_cast<int>(k));
}

Tranche::Tranche(double attach, double detach) : a_(attach), d_(detach) {
    if (!(std::isfinite(attach) && std::isfinite(detach))) {
        throw DomainError("Tranche: attachment and detachment must be finite");
    }
    if (!(attach >= 0.0 && attach < 1.0)) {
        throw DomainError("Tranche: attachment must lie in [0, 1)");
    }
    if (!(detach >= attach && detach <= 1.0)) {
        throw DomainError("Tranche: detachment must lie in [attachment, 1]");
    }
    ha_ = log_level(a_);
    hd_ = log_level(d_);
}

std::string Tranche::label() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f-%.2f", a_, d_);
    return buf;
}

std::string to_string(LossSpec spec) {
    return spec == LossSpec::Linear ? "linear" : "exponential";
}

LossSpec loss_spec_from_string(const std::string& name) {
    if (name == "exponential" || name == "exp") return LossSpec::Exponential;
    if (name == "linear" || name == "lin") return LossSpec::Linear;
    throw DomainError("unknown loss specification '" + name + "'");
}

double log_level(double x) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw DomainError("log_level: argument must lie in [0, 1]");
    }
    if (x == 1.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-x);
}

double loss_from_default(double default_level, LossSpec spec) {
    if (std::isnan(default_level) || default_level < 0.0) {
        throw DomainError("loss_from_default: default level must be non-negative");
    }
    if (spec == LossSpec::Linear) return std::min(default_level, 1.0);
    return -std::expm1(-default_level);
}

double tranche_loss(double loss, const Tranche& tr) {
    if (!(loss >= 0.0 && loss <= 1.0)) {
        throw DomainError("tranche_loss: loss must lie in [0, 1]");
    }
    return std::min(loss, tr.detach()) - std::min(loss, tr.attach());
}

double outstanding_notional(double loss, const Tranche& tr) {
    return tr.width() - tranche_loss(loss, tr);
}

double fair_spread(double def_pv, double prem_pv_1bp) {
    if (prem_pv_1bp == 0.0) {
        throw DomainError("fair_spread: premium leg value per unit spread is zero");
    }
    if (!(prem_pv_1bp > 0.0)) {
        throw DomainError("fair_spread: premium leg value per unit spread must be positive");
    }
    return to_bp(def_pv / prem_pv_1bp);
}

std::vector<Tranche> standard_tranches() {
    return {{0.00, 0.03}, {0.03, 0.07}, {0.07, 0.10}, {0.10, 0.15},
            {0.15, 0.30}, {0.30, 1.00}, {0.00, 1.00}};
}

}  // namespace cdois
