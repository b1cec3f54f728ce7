#pragma once

// Small special-function toolbox: modified Bessel functions for complex
// argument, stable double-factorial ratios and an adaptive quadrature.

#include "lindkit/types.hpp"

#include <functional>

namespace lindkit {

/// I_q(x) for real argument; wraps the standard library, handles q < 0.
double bessel_i(int q, double x);

/// I_q(z) for complex argument via the ascending series (adequate for the
/// |z| <= ~100 range used here).
cxd bessel_i(int q, cxd z);

/// log((n-1)!!) style helpers: log of the double factorial of k (k >= -1).
double log_double_factorial(long long k);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance.
cxd integrate(const std::function<cxd(double)>& f, double a, double b, double abs_tol = 1e-10,
              int max_depth = 48);

}  // namespace lindkit
