/**
 * @file sweep.hpp
 * @brief Parameter sweeps over the altered measure, gains and the timing model.
 *
 * The gain in paths of a reweighted run is G_num = sigma^2 / sigma'^2. The
 * gain in CPU time also accounts for the higher cost of paths with more
 * jumps: with per-path cost c + b rho', G_time = G_num (c + b rho)/(c + b rho').
 */

#pragma once

#include "cdois/mc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdois::sweep {

struct TimingSample {
    double rho_alt;
    double seconds;  ///< process CPU time for the fixed path count
};

/// t = c + b rho'
struct TimingModel {
    double c = 0.0;
    double b = 0.0;
    double r2 = 0.0;
    bool fitted = false;

    double cost(double rho_alt) const { return c + b * rho_alt; }
};

/// Least-squares line through the samples. Needs at least three distinct
/// rho' values. A negative intercept is refitted through the origin and a
/// negative slope is clamped to zero; r2 always refers to the returned line.
TimingModel fit_timing(const std::vector<TimingSample>& samples);

/// CPU seconds of `base` run single-threaded with altered intensity rho' and
/// the altered jump rate of `base`; minimum over `repeats` rounds through all points.
std::vector<TimingSample> measure_timing(const mc::SimConfig& base,
                                         const std::vector<double>& rho_values, int repeats = 3);

/// sigma^2 / sigma'^2; 0 when the altered variance is infinite.
double gain_num(double sigma2_base, double sigma2_alt);

/// Gain in CPU time under the fitted cost model.
double gain_time(double sigma2_base, double sigma2_alt, const TimingModel& tm, double rho_base,
                 double rho_alt);

enum class Axis {
    MuAlt,   ///< vary 1/lambda', keep rho' = rho
    RhoAlt,  ///< vary rho', keep lambda' = lambda
};

Axis axis_from_string(const std::string& name);
std::string to_string(Axis axis);

struct LegPoint {
    double def_mean;
    double def_sd;
    double def_se;
    double prem_mean;
    double prem_sd;
    double prem_se;
    /// sd of R Xdef from the closed-form second moment; NaN for r > 0,
    /// +inf past the phase boundary.
    double def_sd_analytic;
};

struct CurvePoint {
    double value;  ///< the swept coordinate
    ModelParams altered;
    bool divergent;
    std::vector<LegPoint> tranches;
};

/// One simulation per value with all tranches of `base` valued together.
std::vector<CurvePoint> sweep_1d(Axis axis, const std::vector<double>& values,
                                 const mc::SimConfig& base);

struct CellStats {
    double mean;
    double variance;
    double se;
    double variance_se;
    double variance_analytic;  ///< NaN for r > 0
    double g_num;
    double g_time;  ///< NaN without a timing model
};

struct SweepCell {
    double rho_alt;
    double mu_alt;
    bool divergent;  ///< mu' <= mu / 2: the second moment of R Xdef is infinite
    std::vector<CellStats> tranches;
};

struct Optimum {
    bool found = false;
    int i = -1;  ///< index into rho_ratios
    int j = -1;  ///< index into lambda_ratios
    double rho_alt = 0.0;
    double mu_alt = 0.0;
    double gain = 0.0;
};

struct TrancheOptima {
    Tranche tranche;
    double def_mean;  ///< baseline estimate
    double sigma;     ///< baseline sd of Xdef
    Optimum num;
    Optimum time;
};

/// Map over rho'/rho x lambda/lambda'. Every cell reuses the seed of `base`,
/// so cells share their random numbers and the unaltered cell reproduces
/// the baseline exactly.
struct SweepGrid {
    std::vector<double> rho_ratios;
    std::vector<double> lambda_ratios;
    std::vector<double> rho_values;
    std::vector<double> mu_values;
    std::vector<Tranche> tranches;
    std::vector<double> base_mean;
    std::vector<double> base_variance;
    std::vector<SweepCell> cells;  ///< row-major: rho index, then lambda index
    std::optional<TimingModel> timing;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;

    const SweepCell& at(int i, int j) const {
        return cells[static_cast<std::size_t>(i) * lambda_ratios.size() + static_cast<std::size_t>(j)];
    }
};

SweepGrid sweep_2d(const std::vector<double>& rho_ratios, const std::vector<double>& lambda_ratios,
                   const mc::SimConfig& base, const std::optional<TimingModel>& timing = std::nullopt);

/// Argmax of G_num and G_time per tranche over non-divergent cells.
std::vector<TrancheOptima> optima(const SweepGrid& grid);

/// Grid node closest to a point given in ratio coordinates.
std::pair<int, int> nearest_cell(const SweepGrid& grid, double rho_ratio, double lambda_ratio);

/// Chebyshev distance between two grid nodes.
int cell_distance(std::pair<int, int> x, std::pair<int, int> y);

/// 1, 2, ..., n as doubles; the default map axes.
std::vector<double> unit_ratios(int n);

}  // namespace cdois::sweep
