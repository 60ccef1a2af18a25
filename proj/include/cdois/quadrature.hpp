#pragma once

#include <functional>

namespace cdois {

/// Adaptive Gauss-Kronrod (7/15) integration of f over a finite [lo, hi].
///
/// Bisects until the Kronrod error estimate is below rel_tol times the L1 norm
/// of f (or below abs_floor). Throws ConvergenceError otherwise.
double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                 double abs_floor = 1e-300);

}  // namespace cdois
