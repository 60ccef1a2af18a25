#include "cdois/sweep.hpp"

#include "cdois/errors.hpp"
#include "cdois/importance.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <limits>
#include <set>

namespace cdois::sweep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double r_squared(const std::vector<TimingSample>& s, double c, double b) {
    double mean = 0.0;
    for (const auto& p : s) mean += p.seconds;
    mean /= static_cast<double>(s.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (const auto& p : s) {
        const double r = p.seconds - (c + b * p.rho_alt);
        ss_res += r * r;
        ss_tot += (p.seconds - mean) * (p.seconds - mean);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return 1.0 - ss_res / ss_tot;
}

double cpu_seconds(const mc::SimConfig& cfg) {
    const std::clock_t start = std::clock();
    const auto result = mc::run_simulation(cfg);
    const std::clock_t stop = std::clock();
    (void)result;
    return static_cast<double>(stop - start) / CLOCKS_PER_SEC;
}

bool divergent(const importance::MeasurePair& mp) { return !importance::phase_boundary(mp).finite; }

}  // namespace

TimingModel fit_timing(const std::vector<TimingSample>& samples) {
    std::set<double> distinct;
    for (const auto& s : samples) {
        if (!std::isfinite(s.rho_alt) || !std::isfinite(s.seconds)) {
            throw DomainError("fit_timing: non-finite sample");
        }
        distinct.insert(s.rho_alt);
    }
    if (distinct.size() < 3) throw DomainError("fit_timing: need at least three distinct rho' values");

    const double n = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& s : samples) {
        sx += s.rho_alt;
        sy += s.seconds;
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, rxx = 0.0, rxy = 0.0;
    for (const auto& s : samples) {
        sxx += (s.rho_alt - mx) * (s.rho_alt - mx);
        sxy += (s.rho_alt - mx) * (s.seconds - my);
        rxx += s.rho_alt * s.rho_alt;
        rxy += s.rho_alt * s.seconds;
    }
    TimingModel tm;
    tm.b = sxy / sxx;
    tm.c = my - tm.b * mx;
    if (tm.c < 0.0) {
        tm.c = 0.0;
        tm.b = rxy / rxx;
    }
    if (tm.b < 0.0) {
        tm.b = 0.0;
        tm.c = std::max(0.0, my);
    }
    tm.r2 = r_squared(samples, tm.c, tm.b);
    tm.fitted = true;
    return tm;
}

std::vector<TimingSample> measure_timing(const mc::SimConfig& base,
                                         const std::vector<double>& rho_values, int repeats) {
    if (repeats < 1) throw DomainError("measure_timing: repeats must be >= 1");
    std::vector<TimingSample> out;
    for (const double rho : rho_values) out.push_back({rho, std::numeric_limits<double>::infinity()});
    // Repeats run in rounds over all points, so a burst of outside load
    // cannot hit every repeat of one point. Interference only adds time.
    for (int k = 0; k < repeats; ++k) {
        for (auto& sample : out) {
            mc::SimConfig cfg = base;
            cfg.threads = 1;
            cfg.surface.reset();
            cfg.altered = ModelParams(sample.rho_alt, base.altered.lambda());
            sample.seconds = std::min(sample.seconds, cpu_seconds(cfg));
        }
    }
    return out;
}

double gain_num(double sigma2_base, double sigma2_alt) {
    if (!(sigma2_base >= 0.0) || std::isinf(sigma2_base)) {
        throw DomainError("gain_num: baseline variance must be finite and non-negative");
    }
    if (!(sigma2_alt >= 0.0)) throw DomainError("gain_num: altered variance must be non-negative");
    if (sigma2_alt == 0.0) throw DomainError("gain_num: altered variance is zero");
    if (std::isinf(sigma2_alt)) return 0.0;
    return sigma2_base / sigma2_alt;
}

double gain_time(double sigma2_base, double sigma2_alt, const TimingModel& tm, double rho_base,
                 double rho_alt) {
    if (!tm.fitted) throw DomainError("gain_time: timing model not fitted");
    if (!(rho_base > 0.0) || !(rho_alt > 0.0)) throw DomainError("gain_time: intensities must be positive");
    const double cost_base = tm.cost(rho_base);
    const double cost_alt = tm.cost(rho_alt);
    if (!(cost_base > 0.0) || !(cost_alt > 0.0)) throw DomainError("gain_time: non-positive path cost");
    return gain_num(sigma2_base, sigma2_alt) * cost_base / cost_alt;
}

Axis axis_from_string(const std::string& name) {
    if (name == "mu_alt") return Axis::MuAlt;
    if (name == "rho_alt") return Axis::RhoAlt;
    throw DomainError("unknown sweep axis '" + name + "' (expected mu_alt or rho_alt)");
}

std::string to_string(Axis axis) { return axis == Axis::MuAlt ? "mu_alt" : "rho_alt"; }

std::vector<CurvePoint> sweep_1d(Axis axis, const std::vector<double>& values,
                                 const mc::SimConfig& base) {
    std::vector<CurvePoint> curve;
    const bool overlay = base.contract.rate() == 0.0;
    for (const double v : values) {
        if (!(v > 0.0) || std::isinf(v)) throw DomainError("sweep_1d: values must be positive and finite");
        mc::SimConfig cfg = base;
        cfg.altered = axis == Axis::MuAlt ? ModelParams::from_mean_jump(base.real.rho(), v)
                                          : ModelParams(v, base.real.lambda());
        const auto mp = cfg.measures();
        const auto res = mc::run_simulation(cfg);
        CurvePoint pt{v, cfg.altered, divergent(mp), {}};
        for (const auto& ts : res.tranches) {
            double analytic_sd = kNaN;
            if (overlay) {
                const auto rep = importance::variance_report(ts.tranche, cfg.contract.maturity(), mp);
                analytic_sd = std::sqrt(rep.variance_altered);
            }
            pt.tranches.push_back({ts.def.mean(), ts.def.sd(), ts.def.se(), ts.prem.mean(),
                                   ts.prem.sd(), ts.prem.se(), analytic_sd});
        }
        curve.push_back(std::move(pt));
    }
    return curve;
}

SweepGrid sweep_2d(const std::vector<double>& rho_ratios, const std::vector<double>& lambda_ratios,
                   const mc::SimConfig& base, const std::optional<TimingModel>& timing) {
    if (rho_ratios.empty() || lambda_ratios.empty()) throw DomainError("sweep_2d: empty axis");
    for (const double r : rho_ratios) {
        if (!(r > 0.0) || std::isinf(r)) throw DomainError("sweep_2d: ratios must be positive");
    }
    for (const double r : lambda_ratios) {
        if (!(r > 0.0) || std::isinf(r)) throw DomainError("sweep_2d: ratios must be positive");
    }
    if (timing && !timing->fitted) throw DomainError("sweep_2d: timing model not fitted");

    SweepGrid g;
    g.rho_ratios = rho_ratios;
    g.lambda_ratios = lambda_ratios;
    g.tranches = base.tranches;
    g.timing = timing;
    g.n_paths = base.n_paths;
    g.seed = base.seed;
    const double rho = base.real.rho();
    const double lambda = base.real.lambda();
    for (const double r : rho_ratios) g.rho_values.push_back(rho * r);
    for (const double r : lambda_ratios) g.mu_values.push_back(r / lambda);

    mc::SimConfig ref = base;
    ref.altered = base.real;
    ref.surface.reset();
    const auto baseline = mc::run_simulation(ref);
    for (const auto& ts : baseline.tranches) {
        g.base_mean.push_back(ts.def.mean());
        g.base_variance.push_back(ts.def.variance());
    }

    const bool overlay = base.contract.rate() == 0.0;
    const double maturity = base.contract.maturity();
    for (std::size_t i = 0; i < rho_ratios.size(); ++i) {
        for (std::size_t j = 0; j < lambda_ratios.size(); ++j) {
            mc::SimConfig cfg = ref;
            cfg.altered = ModelParams(g.rho_values[i], lambda / lambda_ratios[j]);
            const auto mp = cfg.measures();
            const auto res = cfg.altered == cfg.real ? baseline : mc::run_simulation(cfg);
            SweepCell cell{g.rho_values[i], g.mu_values[j], divergent(mp), {}};
            for (std::size_t t = 0; t < res.tranches.size(); ++t) {
                const auto& st = res.tranches[t].def;
                CellStats cs{};
                cs.mean = st.mean();
                cs.variance = st.variance();
                cs.se = st.se();
                cs.variance_se = st.variance_se();
                cs.variance_analytic =
                    overlay ? importance::variance_report(res.tranches[t].tranche, maturity, mp)
                                  .variance_altered
                            : kNaN;
                const double base_var = g.base_variance[t];
                const bool usable = cs.variance > 0.0 && base_var > 0.0;
                cs.g_num = usable ? gain_num(base_var, cs.variance) : kNaN;
                cs.g_time = usable && timing
                                ? gain_time(base_var, cs.variance, *timing, rho, g.rho_values[i])
                                : kNaN;
                cell.tranches.push_back(cs);
            }
            g.cells.push_back(std::move(cell));
        }
    }
    return g;
}

std::vector<TrancheOptima> optima(const SweepGrid& grid) {
    std::vector<TrancheOptima> out;
    const int ni = static_cast<int>(grid.rho_ratios.size());
    const int nj = static_cast<int>(grid.lambda_ratios.size());
    for (std::size_t t = 0; t < grid.tranches.size(); ++t) {
        TrancheOptima o{grid.tranches[t], grid.base_mean[t], std::sqrt(grid.base_variance[t]), {}, {}};
        auto consider = [&](Optimum& best, double gain, int i, int j) {
            if (!std::isfinite(gain)) return;
            if (!best.found || gain > best.gain) {
                best = {true, i, j, grid.rho_values[static_cast<std::size_t>(i)],
                        grid.mu_values[static_cast<std::size_t>(j)], gain};
            }
        };
        for (int i = 0; i < ni; ++i) {
            for (int j = 0; j < nj; ++j) {
                const auto& cell = grid.at(i, j);
                if (cell.divergent) continue;
                consider(o.num, cell.tranches[t].g_num, i, j);
                consider(o.time, cell.tranches[t].g_time, i, j);
            }
        }
        out.push_back(o);
    }
    return out;
}

std::pair<int, int> nearest_cell(const SweepGrid& grid, double rho_ratio, double lambda_ratio) {
    auto closest = [](const std::vector<double>& axis, double v) {
        int best = 0;
        for (int k = 1; k < static_cast<int>(axis.size()); ++k) {
            if (std::abs(axis[static_cast<std::size_t>(k)] - v) <
                std::abs(axis[static_cast<std::size_t>(best)] - v)) {
                best = k;
            }
        }
        return best;
    };
    return {closest(grid.rho_ratios, rho_ratio), closest(grid.lambda_ratios, lambda_ratio)};
}

int cell_distance(std::pair<int, int> x, std::pair<int, int> y) {
    return std::max(std::abs(x.first - y.first), std::abs(x.second - y.second));
}

std::vector<double> unit_ratios(int n) {
    std::vector<double> v;
    for (int k = 1; k <= n; ++k) v.push_back(k);
    return v;
}

}  // namespace cdois::sweep
