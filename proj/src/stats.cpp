#include "cdois/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cdois {

void CentralMoments::add(double v) {
    CentralMoments one;
    one.n = 1;
    one.mean = v;
    merge(one);
}

void CentralMoments::merge(const CentralMoments& o) {
    if (o.n == 0) return;
    if (n == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double nn = na + nb;
    const double delta = o.mean - mean;
    const double d_n = delta / nn;
    const double d_n2 = d_n * d_n;
    const double cross = delta * d_n * na * nb;  // delta^2 na nb / n

    const double new_m4 = m4 + o.m4 + cross * d_n2 * (na * na - na * nb + nb * nb) +
                          6.0 * d_n2 * (na * na * o.m2 + nb * nb * m2) +
                          4.0 * d_n * (na * o.m3 - nb * m3);
    const double new_m3 =
        m3 + o.m3 + cross * d_n * (na - nb) + 3.0 * d_n * (na * o.m2 - nb * m2);
    m2 = m2 + o.m2 + cross;
    m3 = new_m3;
    m4 = new_m4;
    mean += d_n * nb;
    n += o.n;
}

double CentralMoments::variance() const {
    if (n < 2) return 0.0;
    return std::max(0.0, m2 / static_cast<double>(n - 1));
}

void WeightedStats::add(double weight, double x) {
    y_.add(weight * x);
    x_.add(x);
    sum_w_ += weight;
    sum_wx2_ += weight * x * x;
}

void WeightedStats::merge(const WeightedStats& o) {
    y_.merge(o.y_);
    x_.merge(o.x_);
    sum_w_ += o.sum_w_;
    sum_wx2_ += o.sum_wx2_;
}

double WeightedStats::sd() const { return std::sqrt(variance()); }

double WeightedStats::se() const {
    if (y_.n == 0) return 0.0;
    return sd() / std::sqrt(static_cast<double>(y_.n));
}

double WeightedStats::variance_se() const {
    if (y_.n < 4) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(y_.n);
    const double s2 = variance();
    const double mu4 = y_.m4 / n;
    const double v = (mu4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n;
    return std::sqrt(std::max(0.0, v));
}

double WeightedStats::mean_weight() const {
    return y_.n == 0 ? 0.0 : sum_w_ / static_cast<double>(y_.n);
}

double WeightedStats::weighted_second_moment() const {
    return y_.n == 0 ? 0.0 : sum_wx2_ / static_cast<double>(y_.n);
}

WeightedStats WeightedStats::from_parts(const CentralMoments& y, const CentralMoments& x,
                                        double sum_w, double sum_wx2) {
    WeightedStats s;
    s.y_ = y;
    s.x_ = x;
    s.sum_w_ = sum_w;
    s.sum_wx2_ = sum_wx2;
    return s;
}

WeightedStats ChunkAccumulator::finish() const {
    CentralMoments y;
    CentralMoments x;
    if (n_ > 0) {
        const double n = static_cast<double>(n_);
        // raw moments of the shifted sample, then central moments
        const double a1 = y1_ / n;
        const double a2 = y2_ / n;
        const double a3 = y3_ / n;
        const double a4 = y4_ / n;
        const double c2 = std::max(0.0, a2 - a1 * a1);
        const double c3 = a3 - 3.0 * a1 * a2 + 2.0 * a1 * a1 * a1;
        const double c4 = std::max(0.0, a4 - 4.0 * a1 * a3 + 6.0 * a1 * a1 * a2 - 3.0 * a1 * a1 * a1 * a1);
        y.n = n_;
        y.mean = ky_ + a1;
        y.m2 = n * c2;
        y.m3 = n * c3;
        y.m4 = n * c4;

        const double b1 = x1_ / n;
        x.n = n_;
        x.mean = kx_ + b1;
        x.m2 = n * std::max(0.0, x2_ / n - b1 * b1);
    }
    return WeightedStats::from_parts(y, x, sw_, swx2_);
}

CentralMoments WeightAccumulator::finish() const {
    CentralMoments m;
    if (n_ == 0) return m;
    const double n = static_cast<double>(n_);
    const double a1 = s1_ / n;
    m.n = n_;
    m.mean = 1.0 + a1;
    m.m2 = n * std::max(0.0, s2_ / n - a1 * a1);
    return m;
}

}  // namespace cdois
