// cdois: analytic pricing, importance-sampled simulation, sweeps and
// self-validation for compound Poisson CDO tranches.

#include "cdois/analytic.hpp"
#include "cdois/config.hpp"
#include "cdois/errors.hpp"
#include "cdois/importance.hpp"
#include "cdois/io.hpp"
#include "cdois/mc.hpp"
#include "cdois/sweep.hpp"
#include "cdois/validate.hpp"
#include "cdois/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cdois;

namespace {

enum Exit : int {
    kOk = 0,
    kRuntime = 1,
    kConfig = 2,
    kValidation = 3,
    kDivergent = 4,
};

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> paths;
    std::optional<int> threads;
    std::string format;
    bool strict_divergence = false;
    double tolerance_scale = 1.0;
};

config::RunConfig resolve(const Flags& f) {
    config::RunConfig cfg = f.config.empty() ? config::RunConfig{} : config::load_config(f.config);
    if (f.seed) cfg.mc.seed = *f.seed;
    if (f.paths) {
        if (*f.paths < 1) throw ConfigError("--paths must be at least 1");
        cfg.mc.paths = *f.paths;
    }
    if (f.threads) {
        if (*f.threads < 0) throw ConfigError("--threads must be >= 0");
        cfg.mc.threads = *f.threads;
    }
    if (!f.format.empty()) cfg.outputs.format = f.format;
    if (!f.out.empty()) cfg.outputs.dir = f.out;
    return cfg;
}

fs::path out_dir(const config::RunConfig& cfg) {
    fs::path dir(cfg.outputs.dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os.precision(17);
    return os;
}

std::string table_ext(const config::RunConfig& cfg) { return cfg.outputs.format == "tsv" ? ".tsv" : ".csv"; }

io::TableFormat table_fmt(const config::RunConfig& cfg) {
    return io::table_format_from_string(cfg.outputs.format);
}

// Returns true when the simulation measure gives an infinite weighted
// second moment, after printing the warning.
bool warn_divergence(const importance::MeasurePair& mp) {
    const auto pb = importance::phase_boundary(mp);
    if (pb.finite) return false;
    const double mu = 1.0 / mp.real.lambda();
    const double mu_alt = 1.0 / mp.altered.lambda();
    std::cerr << "warning: altered mean jump mu' = " << mu_alt << " is not above mu/2 = " << mu / 2.0
              << "; the weighted estimator has infinite variance (finite iff mu' > mu/2). "
              << "Means are unbiased but their standard errors are meaningless.\n";
    return true;
}

int cmd_price(const Flags& f) {
    const auto cfg = resolve(f);
    std::vector<analytic::TranchePrice> prices;
    for (const auto& t : cfg.tranches) prices.push_back(analytic::price(t, cfg.contract, cfg.model));

    io::Table shown({"tranche", "def_pv_bp", "prem_pv_1bp", "spread_bp"});
    for (const auto& p : prices) {
        shown.add_row({p.tranche.label(), io::fixed(to_bp(p.def_pv), 4), io::fixed(p.prem_pv_1bp, 6),
                       io::fixed(p.spread_bp(), 4)});
    }
    shown.print(std::cout);

    if (!f.out.empty()) {
        auto os = open_out(out_dir(cfg) / ("price" + table_ext(cfg)));
        io::price_table(prices).write(os, table_fmt(cfg));
    }
    return kOk;
}

int cmd_simulate(const Flags& f) {
    const auto cfg = resolve(f);
    const auto sim = cfg.sim_config();
    sim.validate();
    const bool divergent = warn_divergence(sim.measures());
    if (divergent && f.strict_divergence) return kDivergent;

    const auto res = mc::run_simulation(sim);
    std::vector<analytic::TranchePrice> prices;
    for (const auto& t : cfg.tranches) prices.push_back(analytic::price(t, cfg.contract, cfg.model));

    std::cout << "paths " << res.n_paths << "  seed " << res.seed << "  mean weight "
              << io::fixed(res.weight.mean, 6) << (divergent ? "  [DIVERGENT MEASURE]" : "") << '\n';
    io::Table shown({"tranche", "def_mean_bp", "def_sd_bp", "def_se_bp", "def_analytic_bp", "prem_mean",
                     "prem_se", "prem_analytic"});
    for (std::size_t k = 0; k < res.tranches.size(); ++k) {
        const auto& ts = res.tranches[k];
        shown.add_row({ts.tranche.label(), io::fixed(to_bp(ts.def.mean()), 4),
                       io::fixed(to_bp(ts.def.sd()), 3), io::fixed(to_bp(ts.def.se()), 4),
                       io::fixed(to_bp(prices[k].def_pv), 4), io::fixed(ts.prem.mean(), 6),
                       io::fixed(ts.prem.se(), 6), io::fixed(prices[k].prem_pv_1bp, 6)});
    }
    shown.print(std::cout);

    const bool write = !f.out.empty() || res.surface.has_value();
    if (write) {
        const auto dir = out_dir(cfg);
        const io::Provenance prov{"simulate", res.seed, res.n_paths};
        auto os = open_out(dir / ("simulate" + table_ext(cfg)));
        io::write_provenance(os, prov);
        io::simulation_table(res, &prices, divergent).write(os, table_fmt(cfg));
        if (res.surface) {
            auto ss = open_out(dir / "loss_surface.dat");
            io::write_surface(ss, *res.surface, prov);
        }
    }
    return kOk;
}

std::vector<double> default_axis_values(sweep::Axis axis, const ModelParams& real) {
    std::vector<double> v;
    if (axis == sweep::Axis::MuAlt) {
        // Crosses the mu/2 boundary on purpose so the divergent side is visible.
        const double mu = 1.0 / real.lambda();
        for (int k = 1; k <= 40; ++k) v.push_back(mu * 0.1 * k);
    } else {
        for (int k = 1; k <= 40; ++k) v.push_back(real.rho() * 0.25 * k);
    }
    return v;
}

int cmd_sweep(const Flags& f) {
    const auto cfg = resolve(f);
    const auto axis = sweep::axis_from_string(cfg.sweep.axis);
    auto sim = cfg.sim_config();
    sim.surface.reset();
    sim.validate();
    const auto values = cfg.sweep.values.empty() ? default_axis_values(axis, cfg.model) : cfg.sweep.values;
    if (f.strict_divergence) {
        for (const double v : values) {
            const ModelParams alt = axis == sweep::Axis::MuAlt ? ModelParams::from_mean_jump(cfg.model.rho(), v)
                                                               : ModelParams(v, cfg.model.lambda());
            if (warn_divergence({cfg.model, alt})) return kDivergent;
        }
    }

    const auto curve = sweep::sweep_1d(axis, values, sim);
    const auto dir = out_dir(cfg);
    const io::Provenance prov{"sweep", sim.seed, sim.n_paths};
    io::Table best({"tranche", "a", "d", sweep::to_string(axis), "def_sd_bp", "def_mean_bp", "divergent_points"});
    for (std::size_t t = 0; t < cfg.tranches.size(); ++t) {
        const auto& tr = cfg.tranches[t];
        auto os = open_out(dir / ("sweep_" + sweep::to_string(axis) + "_" + io::file_label(tr) + ".dat"));
        io::write_curve(os, curve, t, tr, axis, prov);

        int divergent = 0;
        const sweep::CurvePoint* arg = nullptr;
        for (const auto& pt : curve) {
            if (pt.divergent) {
                ++divergent;
                continue;
            }
            const double sd = pt.tranches[t].def_sd;
            if (sd > 0.0 && (!arg || sd < arg->tranches[t].def_sd)) arg = &pt;
        }
        const double nan = std::nan("");
        best.add_row({tr.label(), io::num(tr.attach()), io::num(tr.detach()), io::num(arg ? arg->value : nan),
                      io::num(arg ? to_bp(arg->tranches[t].def_sd) : nan),
                      io::num(arg ? to_bp(arg->tranches[t].def_mean) : nan), std::to_string(divergent)});
    }
    auto os = open_out(dir / ("sweep_optima" + table_ext(cfg)));
    io::write_provenance(os, prov);
    best.write(os, table_fmt(cfg));
    best.print(std::cout);
    std::cout << "wrote " << cfg.tranches.size() << " curves to " << dir.string() << '\n';
    return kOk;
}

sweep::TimingModel timing_run(const config::RunConfig& cfg, const fs::path& dir) {
    auto base = cfg.sim_config();
    base.surface.reset();
    base.n_paths = cfg.sweep.timing_paths;
    base.altered = cfg.model;
    const auto samples = sweep::measure_timing(base, cfg.sweep.timing_rhos, cfg.sweep.timing_repeats);
    const auto tm = sweep::fit_timing(samples);
    auto os = open_out(dir / "timing.dat");
    io::write_timing(os, samples, tm, {"timing", base.seed, base.n_paths});
    for (const auto& s : samples) {
        std::cout << "rho' " << io::num(s.rho_alt) << "  cpu " << io::fixed(s.seconds, 4) << " s\n";
    }
    std::cout << "fit t = c + b rho': c = " << io::fixed(tm.c, 5) << "  b = " << io::fixed(tm.b, 5)
              << "  R^2 = " << io::fixed(tm.r2, 5) << '\n';
    return tm;
}

int cmd_timing(const Flags& f) {
    const auto cfg = resolve(f);
    cfg.sim_config().validate();
    timing_run(cfg, out_dir(cfg));
    return kOk;
}

int cmd_map(const Flags& f) {
    const auto cfg = resolve(f);
    auto sim = cfg.sim_config();
    sim.surface.reset();
    sim.validate();
    const auto dir = out_dir(cfg);

    bool any_divergent = false;
    for (const double rr : cfg.sweep.rho_ratios) {
        for (const double lr : cfg.sweep.lambda_ratios) {
            const ModelParams alt(cfg.model.rho() * rr, cfg.model.lambda() / lr);
            if (!importance::phase_boundary({cfg.model, alt}).finite) any_divergent = true;
        }
    }
    if (any_divergent) {
        std::cerr << "warning: some cells have mu' <= mu/2 (infinite weighted variance); they are "
                     "marked 'div' and excluded from the optima\n";
        if (f.strict_divergence) return kDivergent;
    }

    sweep::TimingModel tm;
    if (cfg.sweep.timing_c && cfg.sweep.timing_b) {
        tm.c = *cfg.sweep.timing_c;
        tm.b = *cfg.sweep.timing_b;
        tm.r2 = std::nan("");
        tm.fitted = true;
    } else {
        tm = timing_run(cfg, dir);
    }

    const auto grid = sweep::sweep_2d(cfg.sweep.rho_ratios, cfg.sweep.lambda_ratios, sim, tm);
    const io::Provenance prov{"map", sim.seed, sim.n_paths};
    std::vector<io::MapQuantity> quantities{io::MapQuantity::GNum, io::MapQuantity::GTime,
                                            io::MapQuantity::NegLog2GNum};
    if (cfg.contract.rate() == 0.0) quantities.push_back(io::MapQuantity::VarianceRatioAnalytic);
    for (std::size_t t = 0; t < grid.tranches.size(); ++t) {
        for (const auto q : quantities) {
            auto os = open_out(dir / ("map_" + io::to_string(q) + "_" + io::file_label(grid.tranches[t]) + ".dat"));
            io::write_map(os, grid, t, q, prov);
        }
    }
    const auto opt = sweep::optima(grid);
    const auto table = io::optima_table(opt);
    auto os = open_out(dir / ("optima" + table_ext(cfg)));
    io::write_provenance(os, prov);
    table.write(os, table_fmt(cfg));
    table.print(std::cout);
    return kOk;
}

int cmd_validate(const Flags& f) {
    const auto cfg = resolve(f);
    validate::Options opt;
    opt.tolerance_scale = f.tolerance_scale;
    opt.seed = cfg.mc.seed;
    if (f.paths) opt.paths = *f.paths;
    const auto rep = validate::run_validation(opt);
    std::string group;
    for (const auto& c : rep.checks) {
        if (c.group != group) {
            group = c.group;
            std::cout << "[" << group << "]\n";
        }
        std::cout << (c.passed ? "  PASS  " : "  FAIL  ") << c.name << "  value=" << io::num(c.value)
                  << "  reference=" << io::num(c.reference) << "  tol=" << io::num(c.tolerance) << '\n';
    }
    std::cout << rep.checks.size() - static_cast<std::size_t>(rep.failures()) << "/" << rep.checks.size()
              << " checks passed\n";
    return rep.passed() ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cdois: CDO tranche pricing with importance-sampled Monte Carlo"};
    app.set_version_flag("--version", std::string(kEngineVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", f.out, "output directory");
    app.add_option("--seed", f.seed, "master seed");
    app.add_option("--paths", f.paths, "Monte Carlo paths (per cell for map)");
    app.add_option("--threads", f.threads, "worker threads, 0 = all cores");
    app.add_option("--format", f.format, "table format")->check(CLI::IsMember({"csv", "tsv"}));
    app.add_flag("--strict-divergence", f.strict_divergence,
                 "exit with code 4 instead of warning when mu' <= mu/2");

    auto* price = app.add_subcommand("price", "analytic leg values and fair spreads");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo statistics with analytic overlay");
    auto* sweep = app.add_subcommand("sweep", "1-D sweep of the altered mean jump or intensity");
    auto* map = app.add_subcommand("map", "2-D gain map over (rho'/rho, lambda/lambda')");
    auto* timing = app.add_subcommand("timing", "CPU time per run against rho'");
    auto* validate = app.add_subcommand("validate", "run the self-check suite");
    validate->add_option("--tolerance-scale", f.tolerance_scale, "multiply every tolerance")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*price) return cmd_price(f);
        if (*simulate) return cmd_simulate(f);
        if (*sweep) return cmd_sweep(f);
        if (*map) return cmd_map(f);
        if (*timing) return cmd_timing(f);
        if (*validate) return cmd_validate(f);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kRuntime;
}
