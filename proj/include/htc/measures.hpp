#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace htc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed or half-open real interval; either end may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool bounded() const;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // +inf when the second moment diverges
};

/// A probability law on the real line exposed through its density, distribution
/// function and quantile. Implementations are immutable and thread-safe.
class Measure {
public:
    virtual ~Measure() = default;

    virtual std::string name() const = 0;
    virtual Interval support() const = 0;
    virtual double density(double x) const = 0;
    virtual double cdf(double x) const = 0;
    /// P(X >= x); overridden where 1 - cdf loses precision in the upper tail.
    virtual double survival(double x) const { return 1.0 - cdf(x); }
    /// Generalized inverse of the cdf on (0, 1).
    virtual double quantile(double p) const = 0;
    /// quantile(1 - s), accurate for small s.
    virtual double upper_quantile(double s) const { return quantile(1.0 - s); }
    virtual std::optional<Moments> analytic_moments() const { return std::nullopt; }
    /// True when half-lines are known to extremize the isoperimetric ratio.
    virtual bool tail_monotone() const { return false; }
    /// Closed-form alpha-Cheeger constant where it is known, else nullopt.
    virtual std::optional<double> analytic_cheeger(double /*alpha*/) const { return std::nullopt; }
    /// Parameter echo for reports.
    virtual nlohmann::json describe() const = 0;

    /// quantile(p) for p <= 1/2 and upper_quantile(1 - p) otherwise.
    double quantile_precise(double p) const { return p <= 0.5 ? quantile(p) : upper_quantile(1.0 - p); }
};

using MeasurePtr = std::shared_ptr<const Measure>;

struct ParetoParams {
    double lambda = 5.0;
};

/// X(alpha, I): the median-centered law whose quantile derivative saturates
/// the fluctuation bound (I / min{p, 1-p})^(1/alpha).
struct ExtremalParams {
    double alpha = 0.8;
    double cheeger = 1.0;

    /// Tail exponent b = 1 / (1 - alpha).
    double b() const;
    /// Scale a = ((1 - alpha) / alpha) * cheeger^(-1/alpha) * 2^((alpha - 1) / alpha).
    double a() const;
};

/// Pareto law (lambda - 1) x^(-lambda) on [1, inf).
MeasurePtr pareto_measure(ParetoParams params);

/// Two-sided exponential (Laplace) law (t / 2) exp(-t |x|).
MeasurePtr laplace_measure(double t);

/// Extremal law with density (a(b-1)/2) (a|x| + 1)^(-b) and quantile
/// Q(p) = +/- cheeger^(1/alpha) (alpha / (1 - alpha)) (min{p,1-p}^(1-1/alpha) - 2^(1/alpha - 1)).
MeasurePtr extremal_measure(ExtremalParams params);

/// Closed-form quantile of the extremal law, straight from its integral definition.
double extremal_quantile(const ExtremalParams& params, double p);

/// Measure defined by a (possibly unnormalized within 1e-6) density on an interval.
/// The cdf is built by adaptive quadrature and the quantile by bracketed root finding.
/// Throws NumericalError if the total mass differs from 1 by more than 1e-6,
/// or if a negative density value is seen at a probe point.
MeasurePtr measure_from_density(std::function<double(double)> density, Interval support,
                                std::string label = "density");

/// Uniform law on [lo, hi], mostly useful as a compact-support reference.
MeasurePtr uniform_measure(double lo, double hi);

/// count i.i.d. draws by inverse transform of a counter-based uniform stream.
std::vector<double> sample(const Measure& measure, std::uint64_t seed, std::size_t count);

}  // namespace htc
