#include "htc/measures.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

#include "htc/errors.hpp"
#include "htc/quadrature.hpp"
#include "htc/rng.hpp"

namespace htc {

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

namespace {

nlohmann::json interval_json(const Interval& s) {
    auto end = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return v > 0 ? "inf" : "-inf";
    };
    return nlohmann::json::array({end(s.lo), end(s.hi)});
}

class Pareto final : public Measure {
public:
    explicit Pareto(double lambda) : lambda_(lambda) {}

    std::string name() const override { return "pareto"; }
    Interval support() const override { return {1.0, kInf}; }

    double density(double x) const override {
        if (x < 1.0) return 0.0;
        return (lambda_ - 1.0) * std::pow(x, -lambda_);
    }
    double cdf(double x) const override {
        if (x <= 1.0) return 0.0;
        return -std::expm1((1.0 - lambda_) * std::log(x));
    }
    double survival(double x) const override {
        if (x <= 1.0) return 1.0;
        return std::pow(x, 1.0 - lambda_);
    }
    double quantile(double p) const override {
        if (p <= 0.0) return 1.0;
        if (p >= 1.0) return kInf;
        return std::exp(-std::log1p(-p) / (lambda_ - 1.0));
    }
    double upper_quantile(double s) const override {
        if (s >= 1.0) return 1.0;
        if (s <= 0.0) return kInf;
        return std::pow(s, -1.0 / (lambda_ - 1.0));
    }
    std::optional<Moments> analytic_moments() const override {
        if (lambda_ <= 2.0) return std::nullopt;
        const double mean = (lambda_ - 1.0) / (lambda_ - 2.0);
        const double var = lambda_ > 3.0 ? (lambda_ - 1.0) / (lambda_ - 3.0) - mean * mean : kInf;
        return Moments{mean, var};
    }
    bool tail_monotone() const override { return true; }
    std::optional<double> analytic_cheeger(double alpha) const override {
        // Upper half-lines give the constant (lambda-1)^(-alpha) exactly when alpha = (lambda-1)/lambda.
        if (std::abs(alpha - (lambda_ - 1.0) / lambda_) > 1e-15) return std::nullopt;
        return std::pow(lambda_ - 1.0, -alpha);
    }
    nlohmann::json describe() const override { return {{"name", "pareto"}, {"lambda", lambda_}}; }

private:
    double lambda_;
};

class Laplace final : public Measure {
public:
    explicit Laplace(double t) : t_(t) {}

    std::string name() const override { return "laplace"; }
    Interval support() const override { return {-kInf, kInf}; }

    double density(double x) const override { return 0.5 * t_ * std::exp(-t_ * std::abs(x)); }
    double cdf(double x) const override {
        if (x < 0.0) return 0.5 * std::exp(t_ * x);
        return 1.0 - 0.5 * std::exp(-t_ * x);
    }
    double survival(double x) const override {
        if (x >= 0.0) return 0.5 * std::exp(-t_ * x);
        return 1.0 - 0.5 * std::exp(t_ * x);
    }
    double quantile(double p) const override {
        if (p <= 0.0) return -kInf;
        if (p >= 1.0) return kInf;
        if (p < 0.5) return std::log(2.0 * p) / t_;
        return -std::log(2.0 * (1.0 - p)) / t_;
    }
    double upper_quantile(double s) const override {
        if (s <= 0.0) return kInf;
        if (s >= 1.0) return -kInf;
        if (s <= 0.5) return -std::log(2.0 * s) / t_;
        return std::log(2.0 * (1.0 - s)) / t_;
    }
    std::optional<Moments> analytic_moments() const override { return Moments{0.0, 2.0 / (t_ * t_)}; }
    bool tail_monotone() const override { return true; }
    std::optional<double> analytic_cheeger(double alpha) const override {
        if (alpha != 1.0) return std::nullopt;
        return 1.0 / t_;
    }
    nlohmann::json describe() const override { return {{"name", "laplace"}, {"t", t_}}; }

private:
    double t_;
};

class Extremal final : public Measure {
public:
    explicit Extremal(ExtremalParams p) : params_(p), a_(p.a()), b_(p.b()) {}

    std::string name() const override { return "extremal"; }
    Interval support() const override { return {-kInf, kInf}; }

    double density(double x) const override {
        return 0.5 * a_ * (b_ - 1.0) * std::pow(a_ * std::abs(x) + 1.0, -b_);
    }
    double cdf(double x) const override {
        if (x < 0.0) return half_tail(-x);
        return 1.0 - half_tail(x);
    }
    double survival(double x) const override {
        if (x >= 0.0) return half_tail(x);
        return 1.0 - half_tail(-x);
    }
    double quantile(double p) const override { return extremal_quantile(params_, p); }
    double upper_quantile(double s) const override {
        if (s <= 0.0) return kInf;
        if (s >= 1.0) return -kInf;
        if (s <= 0.5) return branch(s);
        return -branch(1.0 - s);
    }
    std::optional<Moments> analytic_moments() const override {
        if (params_.alpha <= 0.5) return std::nullopt;
        if (params_.alpha <= 2.0 / 3.0) return Moments{0.0, kInf};
        return Moments{0.0, 2.0 / (a_ * a_ * (b_ - 2.0) * (b_ - 3.0))};
    }
    bool tail_monotone() const override { return true; }
    std::optional<double> analytic_cheeger(double alpha) const override {
        if (alpha != params_.alpha) return std::nullopt;
        return params_.cheeger;
    }
    nlohmann::json describe() const override {
        return {{"name", "extremal"}, {"alpha", params_.alpha}, {"cheeger", params_.cheeger},
                {"a", a_}, {"b", b_}};
    }

    // Upper branch value at tail mass s in (0, 1/2].
    double branch(double s) const {
        const double alpha = params_.alpha;
        const double scale = std::pow(params_.cheeger, 1.0 / alpha) * alpha / (1.0 - alpha);
        return scale * (std::pow(s, 1.0 - 1.0 / alpha) - std::pow(2.0, 1.0 / alpha - 1.0));
    }

private:
    double half_tail(double y) const { return 0.5 * std::pow(a_ * y + 1.0, 1.0 - b_); }

    ExtremalParams params_;
    double a_;
    double b_;
};

class Uniform final : public Measure {
public:
    Uniform(double lo, double hi) : lo_(lo), hi_(hi) {}

    std::string name() const override { return "uniform"; }
    Interval support() const override { return {lo_, hi_}; }
    double density(double x) const override { return (x < lo_ || x > hi_) ? 0.0 : 1.0 / (hi_ - lo_); }
    double cdf(double x) const override { return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0); }
    double survival(double x) const override { return std::clamp((hi_ - x) / (hi_ - lo_), 0.0, 1.0); }
    double quantile(double p) const override { return lo_ + std::clamp(p, 0.0, 1.0) * (hi_ - lo_); }
    double upper_quantile(double s) const override { return hi_ - std::clamp(s, 0.0, 1.0) * (hi_ - lo_); }
    std::optional<Moments> analytic_moments() const override {
        const double w = hi_ - lo_;
        return Moments{0.5 * (lo_ + hi_), w * w / 12.0};
    }
    bool tail_monotone() const override { return true; }
    std::optional<double> analytic_cheeger(double alpha) const override {
        return 0.5 * std::pow(hi_ - lo_, alpha);
    }
    nlohmann::json describe() const override { return {{"name", "uniform"}, {"lo", lo_}, {"hi", hi_}}; }

private:
    double lo_;
    double hi_;
};

// Density-defined law. The support is mapped onto s in [0, 1] and cut at
// kKnots equally spaced s-values; masses of the pieces are tabulated once so
// cdf and survival evaluations only integrate inside a single piece.
class DensityMeasure final : public Measure {
public:
    static constexpr int kKnots = 256;

    DensityMeasure(std::function<double(double)> f, Interval support, std::string label)
        : f_(std::move(f)), support_(support), label_(std::move(label)) {
        if (!(support_.lo < support_.hi)) throw DomainError("measure_from_density: empty support interval");
        x_.resize(kKnots + 1);
        for (int k = 0; k <= kKnots; ++k) x_[k] = to_x(static_cast<double>(k) / kKnots);

        for (int k = 0; k <= kKnots; ++k) {
            probe(x_[k]);
            if (k < kKnots && std::isfinite(x_[k]) && std::isfinite(x_[k + 1])) probe(0.5 * (x_[k] + x_[k + 1]));
        }

        std::vector<double> piece(kKnots);
        double total = 0.0;
        for (int k = 0; k < kKnots; ++k) {
            piece[k] = integrate(raw(), x_[k], x_[k + 1], 1e-12).value;
            if (!std::isfinite(piece[k])) throw NumericalError("measure_from_density: density is not integrable");
            total += piece[k];
        }
        if (!(std::abs(total - 1.0) <= 1e-6)) {
            throw NumericalError("measure_from_density: density integrates to " + std::to_string(total) +
                                 ", not 1 within 1e-6");
        }
        scale_ = 1.0 / total;
        below_.assign(kKnots + 1, 0.0);
        above_.assign(kKnots + 1, 0.0);
        for (int k = 0; k < kKnots; ++k) below_[k + 1] = below_[k] + piece[k] * scale_;
        for (int k = kKnots; k > 0; --k) above_[k - 1] = above_[k] + piece[k - 1] * scale_;
        below_[kKnots] = 1.0;
        above_[0] = 1.0;
    }

    std::string name() const override { return label_; }
    Interval support() const override { return support_; }

    double density(double x) const override {
        if (x < support_.lo || x > support_.hi) return 0.0;
        return scale_ * f_(x);
    }

    double cdf(double x) const override {
        if (x <= support_.lo) return 0.0;
        if (x >= support_.hi) return 1.0;
        const int k = cell_of(x);
        const double part = scale_ * integrate(raw(), x_[k], x, 1e-13).value;
        return std::clamp(below_[k] + part, 0.0, 1.0);
    }

    double survival(double x) const override {
        if (x <= support_.lo) return 1.0;
        if (x >= support_.hi) return 0.0;
        const int k = cell_of(x);
        const double part = scale_ * integrate(raw(), x, x_[k + 1], 1e-13).value;
        return std::clamp(above_[k + 1] + part, 0.0, 1.0);
    }

    double quantile(double p) const override {
        if (p <= 0.0) return support_.lo;
        if (p >= 1.0) return support_.hi;
        if (p > 0.5) return upper_quantile(1.0 - p);
        const auto it = std::upper_bound(below_.begin(), below_.end(), p);
        const int k = std::clamp(static_cast<int>(it - below_.begin()) - 1, 0, kKnots - 1);
        return solve(k, [&](double x) { return cdf(x) - p; });
    }

    double upper_quantile(double s) const override {
        if (s <= 0.0) return support_.hi;
        if (s >= 1.0) return support_.lo;
        if (s > 0.5) return quantile(1.0 - s);
        // above_ is decreasing; find k with above_[k] >= s > above_[k+1].
        int k = 0;
        while (k < kKnots - 1 && above_[k + 1] >= s) ++k;
        return solve(k, [&](double x) { return s - survival(x); });
    }

    nlohmann::json describe() const override {
        return {{"name", label_}, {"support", interval_json(support_)}, {"normalization", scale_}};
    }

private:
    RealFn raw() const {
        return [this](double x) { return f_(x); };
    }

    void probe(double x) const {
        if (!std::isfinite(x)) return;
        const double v = f_(x);
        if (v < 0.0) throw NumericalError("measure_from_density: negative density at x = " + std::to_string(x));
        if (std::isnan(v)) throw NumericalError("measure_from_density: density is NaN at x = " + std::to_string(x));
    }

    double to_x(double s) const {
        const bool lo_inf = std::isinf(support_.lo);
        const bool hi_inf = std::isinf(support_.hi);
        if (!lo_inf && !hi_inf) return s >= 1.0 ? support_.hi : support_.lo + s * (support_.hi - support_.lo);
        if (s <= 0.0 && lo_inf) return -kInf;
        if (s >= 1.0 && hi_inf) return kInf;
        if (lo_inf && hi_inf) return (s - 0.5) / (s * (1.0 - s));
        if (hi_inf) return support_.lo + s / (1.0 - s);
        return support_.hi - (1.0 - s) / s;
    }

    int cell_of(double x) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return std::clamp(static_cast<int>(it - x_.begin()) - 1, 0, kKnots - 1);
    }

    // Root of a nondecreasing g on piece k, solved in the s coordinate so
    // infinite endpoints stay bracketable.
    template <class G>
    double solve(int k, G g) const {
        double s_lo = static_cast<double>(k) / kKnots;
        double s_hi = static_cast<double>(k + 1) / kKnots;
        auto h = [&](double s) {
            const double x = to_x(s);
            if (x == -kInf) return -1.0;
            if (x == kInf) return 1.0;
            return g(x);
        };
        double g_lo = h(s_lo);
        double g_hi = h(s_hi);
        if (g_lo >= 0.0) return to_x(s_lo);
        if (g_hi <= 0.0) return to_x(s_hi);
        std::uintmax_t iters = 200;
        auto [a, b] = boost::math::tools::toms748_solve(h, s_lo, s_hi, g_lo, g_hi,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
        return to_x(0.5 * (a + b));
    }

    std::function<double(double)> f_;
    Interval support_;
    std::string label_;
    double scale_ = 1.0;
    std::vector<double> x_;
    std::vector<double> below_;
    std::vector<double> above_;
};

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

double ExtremalParams::b() const { return 1.0 / (1.0 - alpha); }

double ExtremalParams::a() const {
    return ((1.0 - alpha) / alpha) * std::pow(cheeger, -1.0 / alpha) * std::pow(2.0, (alpha - 1.0) / alpha);
}

MeasurePtr pareto_measure(ParetoParams params) {
    require_finite(params.lambda, "lambda");
    if (!(params.lambda > 1.0)) throw DomainError("Pareto law requires lambda > 1");
    return std::make_shared<Pareto>(params.lambda);
}

MeasurePtr laplace_measure(double t) {
    require_finite(t, "t");
    if (!(t > 0.0)) throw DomainError("two-sided exponential law requires t > 0");
    return std::make_shared<Laplace>(t);
}

MeasurePtr extremal_measure(ExtremalParams params) {
    if (!(params.alpha > 0.0 && params.alpha < 1.0)) throw DomainError("extremal law requires 0 < alpha < 1");
    require_finite(params.cheeger, "cheeger");
    if (!(params.cheeger > 0.0)) throw DomainError("extremal law requires a positive Cheeger value");
    return std::make_shared<Extremal>(params);
}

double extremal_quantile(const ExtremalParams& params, double p) {
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;
    const double alpha = params.alpha;
    const double scale = std::pow(params.cheeger, 1.0 / alpha) * alpha / (1.0 - alpha);
    const double shift = std::pow(2.0, 1.0 / alpha - 1.0);
    if (p >= 0.5) return scale * (std::pow(1.0 - p, 1.0 - 1.0 / alpha) - shift);
    return -scale * (std::pow(p, 1.0 - 1.0 / alpha) - shift);
}

MeasurePtr measure_from_density(std::function<double(double)> density, Interval support, std::string label) {
    if (!density) throw DomainError("measure_from_density: empty density callable");
    return std::make_shared<DensityMeasure>(std::move(density), support, std::move(label));
}

MeasurePtr uniform_measure(double lo, double hi) {
    require_finite(lo, "lo");
    require_finite(hi, "hi");
    if (!(lo < hi)) throw DomainError("uniform law requires lo < hi");
    return std::make_shared<Uniform>(lo, hi);
}

std::vector<double> sample(const Measure& measure, std::uint64_t seed, std::size_t count) {
    if (count < 1) throw DomainError("sample: count must be at least 1");
    const CounterStream stream(seed);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = measure.quantile_precise(stream.uniform(i));
    return out;
}

}  // namespace htc
