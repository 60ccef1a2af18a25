/**
 * @file config.hpp
 * @brief JSON run configuration shared by the command-line subcommands.
 *
 * Every section is optional and falls back to the calm-market parameter set
 * (rho = 0.05, lambda = 10, M = 5, r = 0, quarterly grid, standard tranches).
 * Errors carry the 1-based line of the offending value.
 */

#pragma once

#include "cdois/mc.hpp"
#include "cdois/sweep.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdois::config {

struct McSection {
    std::int64_t paths = 100000;
    std::uint64_t seed = 20240531;
    std::int64_t chunk_size = 4096;
    int threads = 0;

    friend bool operator==(const McSection&, const McSection&) = default;
};

struct SweepSection {
    std::string axis = "mu_alt";
    std::vector<double> values;  ///< empty selects a default range for the axis
    std::vector<double> rho_ratios = sweep::unit_ratios(10);
    std::vector<double> lambda_ratios = sweep::unit_ratios(10);
    std::vector<double> timing_rhos{0.05, 0.5, 1.0, 2.0, 4.0, 6.0};
    std::int64_t timing_paths = 1000000;
    int timing_repeats = 3;
    std::optional<double> timing_c;  ///< preset cost model; measured when absent
    std::optional<double> timing_b;

    friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct OutputSection {
    std::string dir = "cdois-out";
    std::string format = "csv";  ///< csv or tsv

    friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct SurfaceSection {
    int time_bins = 20;
    int loss_bins = 50;

    friend bool operator==(const SurfaceSection&, const SurfaceSection&) = default;
};

struct RunConfig {
    ModelParams model{0.05, 10.0};
    std::optional<ModelParams> altered;
    Contract contract{5.0, 0.0, 4};
    std::vector<Tranche> tranches = standard_tranches();
    LossSpec loss_spec = LossSpec::Exponential;
    McSection mc;
    std::optional<SurfaceSection> surface;
    SweepSection sweep;
    OutputSection outputs;

    /// The simulation measure: `altered` when given, otherwise the real one.
    ModelParams simulation_params() const { return altered.value_or(model); }
    mc::SimConfig sim_config() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parse a JSON document. Throws ConfigError with the line of the problem.
RunConfig parse_config(const std::string& text);

/// Read and parse a file; an unreadable file is a ConfigError without line.
RunConfig load_config(const std::string& path);

/// Canonical JSON form: every field explicit, tranches as [a, d] pairs.
std::string serialize_config(const RunConfig& cfg);

/// 1-based line of the value addressed by a JSON pointer such as
/// "/model/rho" or "/tranches/2/1"; 0 when the pointer is not found.
int line_of(const std::string& text, const std::string& pointer);

}  // namespace cdois::config
