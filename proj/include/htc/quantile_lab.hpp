#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htc/measures.hpp"
#include "htc/quadrature.hpp"
#include "htc/report.hpp"

namespace htc {

/// Quantile function of a real random variable f. `upper(s)` is Q(1 - s) and is
/// used wherever s is small; `survival(y)`, when present, is P(f >= y).
struct QuantileFn {
    RealFn lower;
    RealFn upper;
    RealFn survival;

    double operator()(double p) const { return p <= 0.5 ? lower(p) : upper(1.0 - p); }
};

/// Quantile of X - shift for X ~ measure.
QuantileFn quantile_of(const MeasurePtr& measure, double shift = 0.0);

/// Quantile of f(X) for a continuous nondecreasing f, optionally median-centered.
QuantileFn quantile_of(const MeasurePtr& measure, RealFn f, bool centered);

/// Quantile of the ramp (x - m)_+ of X, optionally median-centered.
QuantileFn ramp_quantile(const MeasurePtr& measure, double m, bool centered);

/// Q - Q(1/2).
QuantileFn centered(QuantileFn q);

/// t -> P(sign(f) |f|^gamma >= t) for t > 0, from q.survival or by root finding on q.upper.
RealFn power_tail(const QuantileFn& q, double gamma);

enum class QuantileSource { analytic, sample };

struct EmpiricalQuantile {
    std::vector<double> grid;
    std::vector<double> values;
    QuantileSource source = QuantileSource::analytic;
    std::size_t sample_size = 0;
    std::uint64_t seed = 0;

    /// Piecewise-linear interpolation through the grid values, constant outside.
    QuantileFn as_function() const;
};

/// Equally spaced grid of `cells` cells spanning [lo, hi] (cells + 1 points).
std::vector<double> uniform_grid(double lo, double hi, int cells);

EmpiricalQuantile tabulate(const QuantileFn& q, std::vector<double> grid);

/// Order statistics at ranks ceil(pN); when pN is an integer k the midpoint of
/// the k-th and (k+1)-th order statistics is used.
EmpiricalQuantile empirical_from_sample(std::vector<double> sample, std::vector<double> grid,
                                        std::uint64_t seed = 0);

struct DerivativeCheck {
    BoundReport report;
    double max_ratio = 0.0;     // max over cells of slope / bound(midpoint)
    double min_ratio = 0.0;     // min over cells of slope / bound(midpoint)
    double worst_p = 0.0;       // midpoint of the cell attaining max_ratio
    double grid_slack = 0.0;    // max over cells of bound(worst point) / bound(midpoint) - 1
    std::vector<double> ratios; // per cell, slope / bound(midpoint)
};

/// Secant slopes of q against (cheeger / min{x, 1-x})^(1/alpha). A cell passes when its
/// slope does not exceed the bound at the cell point farthest from 1/2.
DerivativeCheck quantile_derivative_check(const EmpiricalQuantile& q, double alpha, double cheeger);

/// Q(t) <= cheeger^(1/alpha) (alpha / (1 - alpha)) (1 - t)^(1 - 1/alpha) for a median-centered q.
BoundReport ftc_tail_bound(const QuantileFn& q, double alpha, double cheeger, double t);

/// Clamp every value to [-1/2, 1/2].
std::vector<double> truncate_half(std::span<const double> values);

/// E|f|^beta <= c1 * E|(f^gamma) clamped to [-1/2, 1/2]|^(1 - beta (1 - alpha) / alpha).
BoundReport truncation_inequality_check(const QuantileFn& q, double alpha, double beta, double gamma,
                                        double cheeger);

/// G_gamma(x) = cheeger^(gamma/alpha) (alpha/(1-alpha))^gamma (1-x)^(-gamma(1-alpha)/alpha) on [1/2, 1).
double g_gamma_majorant(double alpha, double gamma, double cheeger, double x);
/// d/dx G_gamma(x).
double g_gamma_derivative(double alpha, double gamma, double cheeger, double x);

/// Increments of Q^gamma over each grid cell in [1/2, 1) never exceed those of G_gamma.
BoundReport g_gamma_derivative_check(const EmpiricalQuantile& q, double alpha, double gamma, double cheeger);

/// int_p^1 (Q^gamma - Q(p)^gamma) dx <= c2 (1 - p)^((alpha + gamma alpha - gamma) / alpha), worst over ps.
BoundReport gamma_tail_integral_check(const QuantileFn& q, double alpha, double gamma, double cheeger,
                                      std::span<const double> ps);

struct HalfMassPoint {
    double p_value = 0.5;
    double mass = 0.0;
    double residual = 0.0;  // int_p^1 (g - g(p)) dx - M/2, recomputed by quadrature
};

/// p(g) for an increasing continuous g on [1/2, 1) with g(1/2) = 0.
HalfMassPoint half_mass_point(const RealFn& g);
/// Same, with g given as s -> g(1 - s) on (0, 1/2] for accuracy near x = 1.
HalfMassPoint half_mass_point_tail(const RealFn& g_of_s);

/// 1 - p(Q^gamma) >= c3 M^(alpha / (alpha + gamma alpha - gamma)); reported as lhs = c3 M^e <= rhs = 1 - p.
BoundReport half_mass_bound_check(const QuantileFn& q, double alpha, double gamma, double cheeger);

/// int tail^beta >= c4 M^((alpha beta + gamma alpha - gamma) / (alpha + gamma alpha - gamma)) with
/// M = int tail. Reported as lhs = c4 M^e <= rhs = int tail^beta.
BoundReport main_l2_inequality_check(const RealFn& tail, double alpha, double beta, double gamma, double cheeger);

/// int_0^1 h(Q(p)) dp, split at 1/2 and evaluated with double-exponential quadrature.
double quantile_expectation(const QuantileFn& q, const std::function<double(double)>& h);

struct LemmaSuiteConfig {
    double lambda = 5.0;
    double alpha = 0.8;
    std::optional<double> cheeger;  // defaults to the Pareto Cheeger bound
    std::vector<double> ramp_points{2.0, 4.0};
};

/// Quantile-lemma battery on Pareto(lambda) with f = identity and f = ramp at each m.
std::vector<BoundReport> run_lemma_suite(const LemmaSuiteConfig& config);

}  // namespace htc
