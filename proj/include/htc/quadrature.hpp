#pragma once

#include <functional>

namespace htc {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
};

using RealFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod integration of f over [a, b]. Either endpoint may be
/// infinite; an infinite tail is mapped to (0, 1] by x = a + s (1 - u) / u, s = max(1, |a|), before
/// integration so heavy polynomial tails are not truncated.
QuadResult integrate(const RealFn& f, double a, double b, double abs_tol = 1e-10);

/// Double-exponential integration over (a, b) for integrands with integrable
/// endpoint singularities (quantile-space integrals). Endpoints are never evaluated.
QuadResult integrate_singular(const RealFn& f, double a, double b, double abs_tol = 1e-12);

}  // namespace htc
