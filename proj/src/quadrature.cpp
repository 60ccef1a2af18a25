#include "cdois/quadrature.hpp"

#include "cdois/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace cdois {

namespace {
constexpr unsigned kMaxDepth = 20;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                 double abs_floor) {
    if (!(hi >= lo)) throw DomainError("integrate: upper limit below lower limit");
    if (hi == lo) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, kMaxDepth, rel_tol, &error, &l1);
    if (!std::isfinite(value)) throw ConvergenceError("integrate: non-finite integral");
    if (error > rel_tol * l1 && error > abs_floor) {
        throw ConvergenceError("integrate: error estimate " + std::to_string(error) +
                               " exceeds tolerance on [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
    }
    return value;
}

}  // namespace cdois
