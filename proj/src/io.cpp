#include "cdois/io.hpp"

#include "cdois/errors.hpp"
#include "cdois/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace cdois::io {

TableFormat table_format_from_string(const std::string& name) {
    if (name == "csv") return TableFormat::Csv;
    if (name == "tsv") return TableFormat::Tsv;
    throw DomainError("unknown table format '" + name + "' (expected csv or tsv)");
}

void write_provenance(std::ostream& os, const Provenance& p) {
    os << "# cdois " << kEngineVersion << ' ' << p.command << " seed=" << p.seed
       << " n_paths=" << p.n_paths << '\n';
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw DomainError("Table: row width does not match header");
    rows_.push_back(std::move(cells));
}

void Table::write(std::ostream& os, TableFormat fmt) const {
    const char sep = fmt == TableFormat::Csv ? ',' : '\t';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) os << sep;
            os << cells[k];
        }
        os << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
}

void Table::print(std::ostream& os) const {
    std::vector<std::size_t> width(columns_.size());
    for (std::size_t k = 0; k < columns_.size(); ++k) width[k] = columns_[k].size();
    for (const auto& r : rows_) {
        for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) os << "  ";
            os << std::string(width[k] - cells[k].size(), ' ') << cells[k];
        }
        os << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) return num(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string file_label(const Tranche& tr) { return tr.label(); }

Table price_table(const std::vector<analytic::TranchePrice>& prices) {
    Table t({"tranche", "a", "d", "def_pv", "def_pv_bp", "prem_pv_1bp", "spread_bp"});
    for (const auto& p : prices) {
        t.add_row({p.tranche.label(), num(p.tranche.attach()), num(p.tranche.detach()), num(p.def_pv),
                   num(to_bp(p.def_pv)), num(p.prem_pv_1bp), num(p.spread_bp())});
    }
    return t;
}

Table simulation_table(const mc::SimResult& res, const std::vector<analytic::TranchePrice>* analytic,
                       bool divergent) {
    Table t({"tranche", "def_mean_bp", "def_sd_bp", "def_se_bp", "def_analytic_bp", "prem_mean",
             "prem_sd", "prem_se", "prem_analytic", "divergent"});
    for (std::size_t k = 0; k < res.tranches.size(); ++k) {
        const auto& ts = res.tranches[k];
        const double nan = std::nan("");
        const double ad = analytic ? to_bp((*analytic)[k].def_pv) : nan;
        const double ap = analytic ? (*analytic)[k].prem_pv_1bp : nan;
        t.add_row({ts.tranche.label(), num(to_bp(ts.def.mean())), num(to_bp(ts.def.sd())),
                   num(to_bp(ts.def.se())), num(ad), num(ts.prem.mean()), num(ts.prem.sd()),
                   num(ts.prem.se()), num(ap), divergent ? "1" : "0"});
    }
    return t;
}

Table optima_table(const std::vector<sweep::TrancheOptima>& opt) {
    Table t({"a", "d", "def_pv_bp", "sigma_bp", "g_num", "rho_alt_num", "mu_alt_num", "g_time",
             "rho_alt_time", "mu_alt_time"});
    const double nan = std::nan("");
    for (const auto& o : opt) {
        t.add_row({num(o.tranche.attach()), num(o.tranche.detach()), num(to_bp(o.def_mean)),
                   num(to_bp(o.sigma)), num(o.num.found ? o.num.gain : nan),
                   num(o.num.found ? o.num.rho_alt : nan), num(o.num.found ? o.num.mu_alt : nan),
                   num(o.time.found ? o.time.gain : nan), num(o.time.found ? o.time.rho_alt : nan),
                   num(o.time.found ? o.time.mu_alt : nan)});
    }
    return t;
}

void write_curve(std::ostream& os, const std::vector<sweep::CurvePoint>& curve, std::size_t tranche,
                 const Tranche& tr, sweep::Axis axis, const Provenance& p) {
    write_provenance(os, p);
    os << "# tranche " << tr.label() << '\n';
    os << "# " << to_string(axis)
       << " def_mean_bp def_sd_bp def_se_bp def_sd_analytic_bp prem_mean prem_sd prem_se divergent\n";
    for (const auto& pt : curve) {
        const auto& lp = pt.tranches.at(tranche);
        os << num(pt.value) << ' ' << num(to_bp(lp.def_mean)) << ' ' << num(to_bp(lp.def_sd)) << ' '
           << num(to_bp(lp.def_se)) << ' ' << num(to_bp(lp.def_sd_analytic)) << ' '
           << num(lp.prem_mean) << ' ' << num(lp.prem_sd) << ' ' << num(lp.prem_se) << ' '
           << (pt.divergent ? 1 : 0) << '\n';
    }
}

std::string to_string(MapQuantity q) {
    switch (q) {
        case MapQuantity::GNum: return "gnum";
        case MapQuantity::GTime: return "gtime";
        case MapQuantity::NegLog2GNum: return "neglog2gnum";
        case MapQuantity::VarianceRatioAnalytic: return "varratio_analytic";
    }
    return "unknown";
}

void write_map(std::ostream& os, const sweep::SweepGrid& grid, std::size_t tranche, MapQuantity q,
               const Provenance& p) {
    write_provenance(os, p);
    os << "# " << to_string(q) << " tranche " << grid.tranches.at(tranche).label()
       << "; rows rho'/rho, columns lambda/lambda'\n";
    os << "ratio";
    for (const double r : grid.lambda_ratios) os << ' ' << num(r);
    os << '\n';
    for (std::size_t i = 0; i < grid.rho_ratios.size(); ++i) {
        os << num(grid.rho_ratios[i]);
        for (std::size_t j = 0; j < grid.lambda_ratios.size(); ++j) {
            const auto& cell = grid.at(static_cast<int>(i), static_cast<int>(j));
            if (cell.divergent) {
                os << " div";
                continue;
            }
            const auto& cs = cell.tranches.at(tranche);
            double v = 0.0;
            switch (q) {
                case MapQuantity::GNum: v = cs.g_num; break;
                case MapQuantity::GTime: v = cs.g_time; break;
                case MapQuantity::NegLog2GNum: v = -std::log2(cs.g_num); break;
                case MapQuantity::VarianceRatioAnalytic: {
                    const double base = grid.base_variance.at(tranche);
                    v = base > 0.0 ? cs.variance_analytic / base : std::nan("");
                    break;
                }
            }
            os << ' ' << num(v);
        }
        os << '\n';
    }
}

void write_timing(std::ostream& os, const std::vector<sweep::TimingSample>& samples,
                  const sweep::TimingModel& tm, const Provenance& p) {
    write_provenance(os, p);
    os << "# fit t = c + b rho': c=" << num(tm.c) << " b=" << num(tm.b) << " r2=" << num(tm.r2) << '\n';
    os << "# rho_alt cpu_seconds fitted_seconds\n";
    for (const auto& s : samples) {
        os << num(s.rho_alt) << ' ' << num(s.seconds) << ' ' << num(tm.cost(s.rho_alt)) << '\n';
    }
}

void write_surface(std::ostream& os, const mc::LossSurface& s, const Provenance& p) {
    write_provenance(os, p);
    os << "# time loss_bin_centre probability (L = 0 excluded)\n";
    for (int t = 0; t < s.time_bins(); ++t) {
        for (int b = 0; b < s.loss_bins(); ++b) {
            const auto k = static_cast<std::size_t>(b);
            os << num(s.times[static_cast<std::size_t>(t)]) << ' '
               << num(0.5 * (s.loss_edges[k] + s.loss_edges[k + 1])) << ' ' << num(s.at(t, b)) << '\n';
        }
        os << '\n';
    }
}

}  // namespace cdois::io
