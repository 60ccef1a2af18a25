/**
 * @file mc.hpp
 * @brief Importance-sampled Monte Carlo valuation of tranche legs.
 *
 * Paths are generated under the altered parameters, each carrying the
 * likelihood ratio R = dP/dP' accumulated jump by jump. All requested tranches
 * are valued on the same path, so their statistics are correlated but each
 * estimator is individually unbiased for the real-measure expectation.
 */

#pragma once

#include "cdois/importance.hpp"
#include "cdois/model.hpp"
#include "cdois/rng.hpp"
#include "cdois/stats.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cdois::mc {

using importance::MeasurePair;

/// One scenario of the default process on [0, M].
struct Path {
    std::vector<double> jump_times;  ///< strictly increasing, in (0, M]
    std::vector<double> jump_sizes;  ///< increments of the default level D
    double log_weight = 0.0;
    double rn_weight = 1.0;

    std::size_t jumps() const { return jump_times.size(); }
    double total_default() const;
};

/// Discount factors and their partial sums on the equally spaced payment grid.
class PaymentGrid {
public:
    explicit PaymentGrid(const Contract& c);

    int steps() const { return steps_; }
    double step() const { return dt_; }
    double maturity() const { return maturity_; }
    double rate() const { return rate_; }
    /// e^{-r t_k}, k = 0..steps
    double discount(int k) const { return disc_[static_cast<std::size_t>(k)]; }
    /// sum_{j=1..k} e^{-r t_j}, k = 0..steps
    double discount_sum(int k) const { return cum_[static_cast<std::size_t>(k)]; }
    /// Index k of the payment period (t_{k-1}, t_k] containing time t.
    int period_of(double t) const;

private:
    double maturity_;
    double rate_;
    int steps_;
    double dt_;
    double per_year_;  ///< steps per unit time
    std::vector<double> disc_;
    std::vector<double> cum_;
};

struct LegValues {
    double def;   ///< Xdef
    double prem;  ///< Xprem, premium leg per unit spread
};

/// Optional loss-surface histogram request.
struct SurfaceSpec {
    int time_bins = 20;
    int loss_bins = 50;
};

struct SimConfig {
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 20240531;
    std::int64_t chunk_size = 4096;
    int threads = 1;  ///< 0 selects the hardware concurrency
    ModelParams real{0.05, 10.0};
    ModelParams altered{0.05, 10.0};
    Contract contract{5.0, 0.0, 4};
    std::vector<Tranche> tranches = standard_tranches();
    LossSpec loss_spec = LossSpec::Exponential;
    std::optional<SurfaceSpec> surface;

    MeasurePair measures() const { return {real, altered}; }
    void validate() const;
};

/// Weighted probability of the loss being in each bin at each time point;
/// the L = 0 class is not counted.
struct LossSurface {
    std::vector<double> times;      ///< t_j = j M / time_bins, j = 1..time_bins
    std::vector<double> loss_edges; ///< loss_bins + 1 edges over [0, 1]
    std::vector<double> mass;       ///< row-major [time][loss]

    int time_bins() const { return static_cast<int>(times.size()); }
    int loss_bins() const { return static_cast<int>(loss_edges.size()) - 1; }
    double at(int t, int b) const {
        return mass[static_cast<std::size_t>(t) * static_cast<std::size_t>(loss_bins()) +
                    static_cast<std::size_t>(b)];
    }
    double column_mass(int t) const;
    double column_mean(int t) const;  ///< sum of bin midpoints times mass
};

struct TrancheStats {
    Tranche tranche;
    WeightedStats def;
    WeightedStats prem;
};

struct SimResult {
    std::vector<TrancheStats> tranches;
    CentralMoments weight;       ///< mean and M2 of R; the mean estimates 1
    CentralMoments jump_count;   ///< jumps per path under the simulation measure
    std::optional<LossSurface> surface;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Path generator for a fixed measure pair and maturity, with the
/// per-jump likelihood-ratio constants precomputed.
class PathSampler {
public:
    PathSampler(const MeasurePair& mp, double maturity);

    /// Draw one path under the altered parameters; `out` is reused.
    void draw(PathStream& stream, Path& out) const;

private:
    double maturity_;
    double rho_alt_;
    double lambda_alt_;
    double log_jump_ratio_;  ///< log(rho lambda / (rho' lambda'))
    double d_rho_;           ///< rho - rho'
    double d_lambda_;        ///< lambda - lambda'
};

/// Draw one path under `mp.altered` with its likelihood ratio to `mp.real`.
void generate_path(PathStream& stream, const MeasurePair& mp, double maturity, Path& out);
Path generate_path(PathStream& stream, const MeasurePair& mp, double maturity);

/// Xdef and Xprem of every tranche on one path.
std::vector<LegValues> value_path(const Path& p, const std::vector<Tranche>& tranches,
                                  const PaymentGrid& grid, LossSpec spec = LossSpec::Exponential);

/// Simulate `cfg.n_paths` paths. Deterministic in (seed, n_paths); the chunk
/// size and thread count only change the order of the final moment merges.
SimResult run_simulation(const SimConfig& cfg);

/// Loss surface only; equivalent to run_simulation with `surface` set.
LossSurface loss_surface(const SimConfig& cfg, const SurfaceSpec& bins);

/// Stream of path `index` for a run seeded with `seed`.
inline PathStream path_stream(std::uint64_t seed, std::int64_t index) {
    return PathStream(seed, static_cast<std::uint64_t>(index));
}

}  // namespace cdois::mc
