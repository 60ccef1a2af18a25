/**
 * @file validate.hpp
 * @brief Self-checks run by `cdois validate`: closed forms, series
 * consistency, the backward equation for phi_r and seeded Monte Carlo
 * comparisons.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdois::validate {

struct Check {
    std::string group;
    std::string name;
    double value;
    double reference;
    double tolerance;  ///< absolute, already multiplied by the scale
    bool passed;
};

struct Options {
    double tolerance_scale = 1.0;  ///< multiplies every tolerance; 0 forces failures
    std::uint64_t seed = 20240531;
    std::int64_t paths = 200000;
};

struct Report {
    std::vector<Check> checks;

    bool passed() const;
    int failures() const;
};

Report run_validation(const Options& opt = {});

}  // namespace cdois::validate
