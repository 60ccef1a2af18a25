#include "cdois/validate.hpp"

#include "cdois/analytic.hpp"
#include "cdois/errors.hpp"
#include "cdois/importance.hpp"
#include "cdois/mc.hpp"
#include "cdois/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace cdois::validate {

namespace {

// Calm-market set used throughout.
const ModelParams kParams{0.05, 10.0};
constexpr double kMaturity = 5.0;

class Builder {
public:
    explicit Builder(double scale) : scale_(scale) {}

    // |value - reference| <= tol * scale
    void abs(const std::string& group, const std::string& name, double value, double reference,
             double tol) {
        const double t = tol * scale_;
        const bool ok = std::isfinite(value) && std::abs(value - reference) <= t;
        out_.push_back({group, name, value, reference, t, ok});
    }

    void rel(const std::string& group, const std::string& name, double value, double reference,
             double tol) {
        abs(group, name, value, reference, tol * std::abs(reference));
    }

    // value <= bound * scale, reported against a zero reference
    void below(const std::string& group, const std::string& name, double value, double bound) {
        const double t = bound * scale_;
        out_.push_back({group, name, value, 0.0, t, std::isfinite(value) && value <= t});
    }

    std::vector<Check> take() { return std::move(out_); }

private:
    double scale_;
    std::vector<Check> out_;
};

double pde_residual(double delta, double rate) {
    const analytic::SeriesControl ctl{1e-16, 4096};
    auto f = [&](double h, double m) { return analytic::phi(h, m, rate, kParams, ctl); };
    const double lambda = kParams.lambda();
    const double rho = kParams.rho();
    double worst = 0.0;
    for (const double h : {0.1, 0.3, 0.6, 1.0}) {
        for (const double m : {1.0, 3.0, 5.0}) {
            const double mixed =
                (f(h + delta, m + delta) - f(h + delta, m - delta) - f(h - delta, m + delta) +
                 f(h - delta, m - delta)) /
                (4.0 * delta * delta);
            const double dm = (f(h, m + delta) - f(h, m - delta)) / (2.0 * delta);
            const double dh = (f(h + delta, m) - f(h - delta, m)) / (2.0 * delta);
            const double res = mixed + lambda * dm + (rho + rate) * dh + lambda * rate * f(h, m);
            worst = std::max(worst, std::abs(res));
        }
    }
    return worst;
}

void closed_forms(Builder& b) {
    const Tranche index(0.0, 1.0);
    const Contract c(kMaturity, 0.0);
    const double rho = kParams.rho();
    const double lp1 = kParams.lambda() + 1.0;
    const double def = -std::expm1(-rho * kMaturity / lp1);
    const double prem = lp1 / rho * def;
    const auto p = analytic::price(index, c, kParams);
    b.rel("closed-form", "index def_pv", p.def_pv, def, 1e-8);
    b.rel("closed-form", "index prem_pv_1bp", p.prem_pv_1bp, prem, 1e-8);
    b.rel("closed-form", "index spread_bp", p.spread_bp(), 1e4 * rho / lp1, 1e-8);

    // With discounting, E e^{-r T_0+} over the first jump time and the
    // Laplace transform of D_M give the index legs in closed form.
    const double r = 0.03;
    const Contract cr(kMaturity, r);
    const double s = rho / lp1;  // killing rate of e^{-D}
    const double def_r = s / (s + r) * -std::expm1(-(s + r) * kMaturity);
    const double prem_r = -std::expm1(-(s + r) * kMaturity) / (s + r);
    b.rel("closed-form", "index def_pv r=0.03", analytic::def_pv(index, cr, kParams), def_r, 1e-8);
    b.rel("closed-form", "index prem_pv_1bp r=0.03", analytic::prem_pv_1bp(index, cr, kParams), prem_r,
          1e-8);
}

void series_checks(Builder& b) {
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            const double h = 0.15 * i;
            const double m = 0.5 * j;
            worst = std::max(worst, std::abs(analytic::phi(h, m, 0.0, kParams) -
                                             analytic::phi0(h, m, kParams)));
        }
    }
    b.below("series", "max |phi_0 series - incomplete gamma form|", worst, 1e-10);

    // As h -> 0 the first passage is the first jump: phi_r -> rho/(rho+r) (1 - e^{-(rho+r)M}).
    const double r = 0.03;
    const double rr = kParams.rho() + r;
    const double limit = kParams.rho() / rr * -std::expm1(-rr * kMaturity);
    b.abs("series", "phi_r(h=1e-10) first-jump limit", analytic::phi(1e-10, kMaturity, r, kParams), limit,
          1e-8);

    const double coarse = pde_residual(0.01, r);
    const double fine = pde_residual(0.005, r);
    b.below("series", "backward equation residual, step 0.005", fine, 1e-4);
    // Central differences: halving the step should quarter the residual.
    b.abs("series", "backward equation residual order", coarse / fine, 4.0, 0.4);

    const Tranche ss(0.3, 1.0);
    const double at_zero = analytic::prem_pv_1bp(ss, Contract(kMaturity, 0.0), kParams);
    const double near_zero = analytic::prem_pv_1bp(ss, Contract(kMaturity, 1e-8), kParams);
    b.rel("series", "prem_pv_1bp continuity at r=1e-8", near_zero, at_zero, 1e-6);
    const Contract cs(kMaturity, 0.002);
    b.rel("series", "first-passage vs shortfall premium, r=0.002",
          analytic::prem_pv_1bp_first_passage(ss, cs, kParams),
          analytic::prem_pv_1bp_shortfall(ss, cs, kParams), 1e-7);

    b.rel("series", "expected_def vs def_pv (super senior)",
          importance::expected_def(ss, kMaturity, kParams),
          analytic::def_pv(ss, Contract(kMaturity, 0.0), kParams), 1e-8);

    double mass = 0.0;
    for (long n = 1; n <= 30; ++n) {
        mass += integrate([n](double h) { return importance::joint_density(n, h, kMaturity, kParams); },
                          0.0, 36.0, 1e-12);
    }
    const double target = -std::expm1(-kParams.rho() * kMaturity);
    b.abs("series", "joint density mass", mass, target, 1e-9);
}

void monte_carlo(Builder& b, const Options& opt) {
    mc::SimConfig cfg;
    cfg.n_paths = opt.paths;
    cfg.seed = opt.seed;
    cfg.threads = 1;
    cfg.tranches = {Tranche(0.0, 1.0), Tranche(0.3, 1.0)};
    const auto plain = mc::run_simulation(cfg);
    const Contract c(kMaturity, 0.0);
    const auto& idx = plain.tranches[0];
    b.abs("monte-carlo", "index def mean (real measure)", idx.def.mean(),
          analytic::def_pv(cfg.tranches[0], c, kParams), 4.0 * idx.def.se());

    // The simulated premium leg accrues on the payment grid; a daily grid
    // brings it within noise of continuous accrual.
    mc::SimConfig daily = cfg;
    daily.contract = Contract(kMaturity, 0.0, 360);
    const auto fine = mc::run_simulation(daily);
    b.abs("monte-carlo", "index prem mean (real measure, daily grid)", fine.tranches[0].prem.mean(),
          analytic::prem_pv_1bp(cfg.tranches[0], c, kParams), 4.0 * fine.tranches[0].prem.se());

    cfg.altered = ModelParams::from_mean_jump(kParams.rho(), 0.28);
    const auto is = mc::run_simulation(cfg);
    const auto& ss = is.tranches[1];
    const auto rep = importance::variance_report(ss.tranche, kMaturity, cfg.measures());
    b.abs("monte-carlo", "super senior def mean (mu'=0.28)", ss.def.mean(), rep.mean, 4.0 * ss.def.se());
    b.abs("monte-carlo", "super senior weighted variance (mu'=0.28)", ss.def.variance(),
          rep.variance_altered, 5.0 * ss.def.variance_se());
    const double w_se = std::sqrt(is.weight.variance() / static_cast<double>(is.weight.n));
    b.abs("monte-carlo", "mean likelihood ratio (mu'=0.28)", is.weight.mean, 1.0, 4.0 * w_se);

    // Brute-force first passage of level h = -ln(0.7) against phi_0.
    const double h = -std::log(0.7);
    const mc::PathSampler sampler({kParams, kParams}, kMaturity);
    mc::Path path;
    std::int64_t hits = 0;
    for (std::int64_t k = 0; k < opt.paths; ++k) {
        auto stream = mc::path_stream(opt.seed + 1, k);
        sampler.draw(stream, path);
        if (path.total_default() >= h) ++hits;
    }
    const double n = static_cast<double>(opt.paths);
    const double p = static_cast<double>(hits) / n;
    b.abs("monte-carlo", "first-passage probability h=0.357", p, analytic::phi0(h, kMaturity, kParams),
          4.0 * std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n));
}

}  // namespace

bool Report::passed() const { return failures() == 0; }

int Report::failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

Report run_validation(const Options& opt) {
    if (!(opt.tolerance_scale >= 0.0) || std::isinf(opt.tolerance_scale)) {
        throw DomainError("run_validation: tolerance scale must be finite and non-negative");
    }
    if (opt.paths < 1000) throw DomainError("run_validation: need at least 1000 paths");
    Builder b(opt.tolerance_scale);
    closed_forms(b);
    series_checks(b);
    monte_carlo(b, opt);
    return {b.take()};
}

}  // namespace cdois::validate
