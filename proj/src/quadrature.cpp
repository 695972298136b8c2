#include "htc/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "htc/errors.hpp"

namespace htc {
namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr unsigned kMaxDepth = 24;

// Bisection driven by an absolute tolerance. Boost's own adaptive driver only
// accepts relative tolerances, which stall on pieces whose value is tiny
// compared with the rounding noise of the Kronrod/Gauss difference.
double adapt(const RealFn& f, double a, double b, double tol, unsigned depth, double* err) {
    double e = 0.0, l1 = 0.0;
    const double v = GK::integrate(f, a, b, 0, 0.0, &e, &l1);
    if (e <= tol || e <= 64.0 * std::numeric_limits<double>::epsilon() * l1 || depth == 0 || !std::isfinite(v)) {
        *err += e;
        return v;
    }
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth - 1, err) + adapt(f, mid, b, 0.5 * tol, depth - 1, err);
}

QuadResult finite_gk(const RealFn& f, double a, double b, double tol) {
    QuadResult r;
    r.value = adapt(f, a, b, tol, kMaxDepth, &r.error);
    return r;
}

}  // namespace

QuadResult integrate(const RealFn& f, double a, double b, double abs_tol) {
    if (std::isnan(a) || std::isnan(b)) throw NumericalError("integrate: NaN integration limit");
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate(f, b, a, abs_tol);
        r.value = -r.value;
        return r;
    }
    const double tol = abs_tol;
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) return finite_gk(f, a, b, tol);

    if (lo_inf && hi_inf) {
        QuadResult left = integrate(f, a, 0.0, abs_tol / 2);
        QuadResult right = integrate(f, 0.0, b, abs_tol / 2);
        return {left.value + right.value, left.error + right.error};
    }
    // The tail length scale follows the finite endpoint so that x = c +- s (1 - u) / u
    // puts comparable mass on comparable u-intervals.
    if (hi_inf) {
        const double s = std::max(1.0, std::abs(a));
        auto g = [&](double u) {
            const double x = a + s * (1.0 - u) / u;
            if (std::isinf(x)) return 0.0;
            return s * f(x) / (u * u);
        };
        return finite_gk(g, 0.0, 1.0, tol);
    }
    const double s = std::max(1.0, std::abs(b));
    auto g = [&](double u) {
        const double x = b - s * (1.0 - u) / u;
        if (std::isinf(x)) return 0.0;
        return s * f(x) / (u * u);
    };
    return finite_gk(g, 0.0, 1.0, tol);
}

QuadResult integrate_singular(const RealFn& f, double a, double b, double abs_tol) {
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw NumericalError("integrate_singular: limits must be finite");
    }
    if (a == b) return {};
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    QuadResult r;
    double l1 = 0.0;
    r.value = integrator.integrate(f, a, b, abs_tol, &r.error, &l1);
    return r;
}

}  // namespace htc
