/**
 * @file stats.hpp
 * @brief Streaming moments of reweighted Monte Carlo samples.
 *
 * A sample is a pair (w, x): the likelihood-ratio weight of a path and the
 * payoff it produced. The estimator of E(X) under the real measure is the
 * plain average of y = w x over paths drawn from the simulation measure, and
 * its observable variance is the sample variance of y.
 */

#pragma once

#include <cstdint>

namespace cdois {

/// Count, mean and central moment sums M2..M4 of a scalar sample, mergeable
/// with the pairwise update formulas of Chan et al. and Pebay.
struct CentralMoments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;

    void add(double v);
    void merge(const CentralMoments& other);

    /// Sample variance with the n - 1 denominator; 0 for n < 2.
    double variance() const;
};

/// Weighted payoff statistics for one tranche leg.
class WeightedStats {
public:
    void add(double weight, double x);
    void merge(const WeightedStats& other);

    std::int64_t count() const { return y_.n; }

    /// Average of w x, the estimate of the real-measure expectation.
    double mean() const { return y_.mean; }
    /// Sample variance of w x under the simulation measure.
    double variance() const { return y_.variance(); }
    double sd() const;
    /// sd / sqrt(n)
    double se() const;
    /// Standard error of `variance()` from the fourth central moment.
    double variance_se() const;

    double raw_mean() const { return x_.mean; }
    double raw_variance() const { return x_.variance(); }
    /// Average likelihood-ratio weight; estimates 1.
    double mean_weight() const;
    /// Average of w x^2, estimating the real-measure second moment of x.
    double weighted_second_moment() const;

    const CentralMoments& weighted() const { return y_; }
    const CentralMoments& raw() const { return x_; }
    double sum_weight() const { return sum_w_; }
    double sum_weight_x2() const { return sum_wx2_; }

    /// Assemble from moment blocks, used when converting chunk sums.
    static WeightedStats from_parts(const CentralMoments& y, const CentralMoments& x, double sum_w,
                                    double sum_wx2);

private:
    CentralMoments y_;
    CentralMoments x_;
    double sum_w_ = 0.0;
    double sum_wx2_ = 0.0;
};

/// Shifted power sums for the inner simulation loop. The shift is either
/// supplied (typically the payoff of a path without losses) or taken from the
/// first observation; samples equal to the shift only bump the count.
class ChunkAccumulator {
public:
    ChunkAccumulator() = default;
    ChunkAccumulator(double shift_y, double shift_x)
        : ky_(shift_y), kx_(shift_x), shift_fixed_(true) {}

    void add(double weight, double x) {
        const double y = weight * x;
        if (n_ == 0 && !shift_fixed_) {
            ky_ = y;
            kx_ = x;
        }
        ++n_;
        sw_ += weight;
        swx2_ += y * x;
        if (y == ky_ && x == kx_) return;
        const double dy = y - ky_;
        const double dy2 = dy * dy;
        y1_ += dy;
        y2_ += dy2;
        y3_ += dy2 * dy;
        y4_ += dy2 * dy2;
        const double dx = x - kx_;
        x1_ += dx;
        x2_ += dx * dx;
    }

    std::int64_t count() const { return n_; }
    WeightedStats finish() const;

private:
    std::int64_t n_ = 0;
    double ky_ = 0.0;
    double kx_ = 0.0;
    bool shift_fixed_ = false;
    double y1_ = 0.0, y2_ = 0.0, y3_ = 0.0, y4_ = 0.0;
    double x1_ = 0.0, x2_ = 0.0;
    double sw_ = 0.0;
    double swx2_ = 0.0;
};

/// Count, sum and sum of squares of w - 1 for the likelihood-ratio weights.
class WeightAccumulator {
public:
    void add(double weight) {
        const double dw = weight - 1.0;
        ++n_;
        s1_ += dw;
        s2_ += dw * dw;
    }

    std::int64_t count() const { return n_; }
    /// Mean and M2 only; higher moments are left at zero.
    CentralMoments finish() const;

private:
    std::int64_t n_ = 0;
    double s1_ = 0.0;
    double s2_ = 0.0;
};

}  // namespace cdois
