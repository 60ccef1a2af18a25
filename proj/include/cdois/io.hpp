/**
 * @file io.hpp
 * @brief Delimited tables and whitespace plot-data files.
 *
 * Files produced from random numbers start with `#` comment lines naming the
 * engine version, the seed and the path count.
 */

#pragma once

#include "cdois/analytic.hpp"
#include "cdois/mc.hpp"
#include "cdois/sweep.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cdois::io {

enum class TableFormat { Csv, Tsv };

TableFormat table_format_from_string(const std::string& name);

struct Provenance {
    std::string command;
    std::uint64_t seed = 0;
    std::int64_t n_paths = 0;
};

/// "# cdois <version> <command> seed=<seed> n_paths=<n>"
void write_provenance(std::ostream& os, const Provenance& p);

/// Column-oriented table; cells are stored as text.
class Table {
public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<std::string> cells);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }

    void write(std::ostream& os, TableFormat fmt) const;
    /// Space-padded layout for terminals.
    void print(std::ostream& os) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip representation ("%.17g" trimmed); "inf"/"nan" kept.
std::string num(double v);
/// Fixed number of decimals for terminal reports.
std::string fixed(double v, int decimals);

Table price_table(const std::vector<analytic::TranchePrice>& prices);

/// Per-tranche MC statistics, optionally with analytic legs for comparison.
Table simulation_table(const mc::SimResult& res, const std::vector<analytic::TranchePrice>* analytic,
                       bool divergent);

Table optima_table(const std::vector<sweep::TrancheOptima>& opt);

/// One plot-data block per tranche: value, def mean/sd/se, analytic sd,
/// prem mean/sd/se (all in bp except the premium leg).
void write_curve(std::ostream& os, const std::vector<sweep::CurvePoint>& curve, std::size_t tranche,
                 const Tranche& tr, sweep::Axis axis, const Provenance& p);

enum class MapQuantity { GNum, GTime, NegLog2GNum, VarianceRatioAnalytic };

std::string to_string(MapQuantity q);

/// Matrix file: first row "ratio" and lambda/lambda' values, then one row
/// per rho'/rho. Divergent cells are written as "div".
void write_map(std::ostream& os, const sweep::SweepGrid& grid, std::size_t tranche, MapQuantity q,
               const Provenance& p);

void write_timing(std::ostream& os, const std::vector<sweep::TimingSample>& samples,
                  const sweep::TimingModel& tm, const Provenance& p);

/// time, loss bin centre, mass triples with blank lines between time slices.
void write_surface(std::ostream& os, const mc::LossSurface& s, const Provenance& p);

/// File-name friendly tranche label, e.g. "0.30-1.00".
std::string file_label(const Tranche& tr);

}  // namespace cdois::io
