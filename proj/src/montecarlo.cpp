#include "htc/montecarlo.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <thread>

#include "htc/errors.hpp"
#include "htc/rng.hpp"

namespace htc {
namespace {

struct Welford {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    // Chan et al. pairwise combination.
    void merge(const Welford& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        const double total = na + nb;
        mean += d * nb / total;
        m2 += o.m2 + d * d * na * nb / total;
        n += o.n;
    }

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct BatchResult {
    Welford f;
    Welford norm;
    Welford coord_sum;
    std::vector<double> coord;  // sums of |d_i f|^q
};

double t975(std::uint32_t dof) {
    return boost::math::quantile(boost::math::students_t(static_cast<double>(dof)), 0.975);
}

double stddev(const std::vector<double>& v) {
    Welford w;
    for (double x : v) w.add(x);
    return std::sqrt(w.variance());
}

Interval95 batch_interval(double value, const std::vector<double>& batch_values) {
    const std::uint32_t b = static_cast<std::uint32_t>(batch_values.size());
    const double half = t975(b - 1) * stddev(batch_values) / std::sqrt(static_cast<double>(b));
    return {value, value - half, value + half};
}

unsigned resolve_threads(unsigned requested, std::uint32_t batches) {
    unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::min<unsigned>(t, batches);
}

// Runs body(batch) for every batch; batch b goes to worker b % threads.
template <class Body>
void for_each_batch(std::uint32_t batches, unsigned threads, Body body) {
    if (threads <= 1) {
        for (std::uint32_t b = 0; b < batches; ++b) body(b);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint32_t b = w; b < batches; b += threads) body(b);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void draw(const Measure& m, const CounterStream& stream, std::uint64_t i, std::span<double> x) {
    const std::uint64_t base = i * x.size();
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = m.quantile_precise(stream.uniform(base + j));
}

}  // namespace

void EstimationPlan::validate() const {
    if (!measure) throw DomainError("estimation plan has no measure");
    if (!function) throw DomainError("estimation plan has no function");
    if (dimension < 1) throw DomainError("estimation plan dimension must be at least 1");
    if (function->arity() != dimension) {
        throw DomainError("function arity " + std::to_string(function->arity()) + " does not match dimension " +
                          std::to_string(dimension));
    }
    if (batches < 2) throw DomainError("estimation plan needs at least 2 batches");
    if (samples < 2ull * batches) throw DomainError("estimation plan needs samples >= 2 * batches");
    if (samples % batches != 0) throw DomainError("samples must be divisible by batches");
}

nlohmann::json EstimationPlan::describe() const {
    return {{"measure", measure ? measure->describe() : nlohmann::json(nullptr)},
            {"dimension", dimension},
            {"function", function ? function->describe() : nlohmann::json(nullptr)},
            {"samples", samples},
            {"seed", seed},
            {"batches", batches}};
}

PassResult run_pass(const EstimationPlan& plan, std::optional<double> gradient_q, bool coordinatewise) {
    plan.validate();
    if (gradient_q && !(*gradient_q >= 1.0)) throw DomainError("gradient moment requires q >= 1");
    const std::uint64_t per_batch = plan.samples / plan.batches;
    const std::size_t n = plan.dimension;
    const CounterStream stream(plan.seed);
    std::vector<BatchResult> results(plan.batches);

    for_each_batch(plan.batches, resolve_threads(plan.threads, plan.batches), [&](std::uint32_t b) {
        BatchResult& r = results[b];
        std::vector<double> x(n), g(n);
        if (gradient_q) r.coord.assign(n, 0.0);
        const std::uint64_t first = b * per_batch;
        for (std::uint64_t i = first; i < first + per_batch; ++i) {
            draw(*plan.measure, stream, i, x);
            r.f.add(plan.function->eval(x));
            if (!gradient_q) continue;
            plan.function->grad(x, g);
            const double q = *gradient_q;
            double sq = 0.0, sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                sq += g[j] * g[j];
                const double a = std::pow(std::abs(g[j]), q);
                sum += a;
                r.coord[j] += a;
            }
            r.norm.add(std::pow(sq, q / 2.0));
            r.coord_sum.add(sum);
        }
    });

    PassResult out;
    Welford all;
    std::vector<double> batch_vars, batch_means;
    for (const auto& r : results) {
        all.merge(r.f);
        batch_vars.push_back(r.f.variance());
    }
    VarianceEstimate& v = out.variance;
    v.mean = all.mean;
    v.variance = all.variance();
    const double half = t975(plan.batches - 1) * stddev(batch_vars) / std::sqrt(static_cast<double>(plan.batches));
    v.ci_low = std::max(0.0, v.variance - half);
    v.ci_high = v.variance + half;
    std::vector<double> sorted = batch_vars;
    v.batch_median_variance = empirical_median(std::move(sorted));
    v.n_samples = plan.samples;
    v.seed = plan.seed;
    v.batches = plan.batches;

    if (gradient_q) {
        GradientMoment gm;
        gm.q = *gradient_q;
        Welford norm, sum;
        std::vector<double> norm_means, sum_means;
        std::vector<double> coord(n, 0.0);
        for (const auto& r : results) {
            norm.merge(r.norm);
            sum.merge(r.coord_sum);
            norm_means.push_back(r.norm.mean);
            sum_means.push_back(r.coord_sum.mean);
            for (std::size_t j = 0; j < n; ++j) coord[j] += r.coord[j];
        }
        gm.norm = batch_interval(norm.mean, norm_means);
        gm.coordinate_sum = batch_interval(sum.mean, sum_means);
        if (coordinatewise) {
            for (double& c : coord) c /= static_cast<double>(plan.samples);
            gm.per_coordinate = std::move(coord);
        }
        out.gradient = std::move(gm);
    }
    return out;
}

VarianceEstimate estimate_variance(const EstimationPlan& plan) { return run_pass(plan).variance; }

GradientMoment estimate_gradient_moment(const EstimationPlan& plan, double q, bool coordinatewise) {
    return *run_pass(plan, q, coordinatewise).gradient;
}

double empirical_median(std::vector<double> values) {
    if (values.empty()) throw DomainError("median of an empty sample");
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
}

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double confidence) {
    if (n == 0) throw DomainError("Wilson interval needs n > 0");
    const double z = boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - confidence) / 2.0);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TailEstimate estimate_tail(const EstimationPlan& plan, std::span<const double> thresholds, bool center_median,
                           bool bonferroni) {
    plan.validate();
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw DomainError("tail thresholds must be sorted");
    const std::uint64_t per_batch = plan.samples / plan.batches;
    const CounterStream stream(plan.seed);
    std::vector<double> values(plan.samples);
    for_each_batch(plan.batches, resolve_threads(plan.threads, plan.batches), [&](std::uint32_t b) {
        std::vector<double> x(plan.dimension);
        const std::uint64_t first = b * per_batch;
        for (std::uint64_t i = first; i < first + per_batch; ++i) {
            draw(*plan.measure, stream, i, x);
            values[i] = plan.function->eval(x);
        }
    });

    TailEstimate out;
    out.n_samples = plan.samples;
    out.center = center_median ? empirical_median(values) : 0.0;
    out.confidence = bonferroni && !thresholds.empty() ? 1.0 - 0.05 / static_cast<double>(thresholds.size()) : 0.95;
    for (double& v : values) v -= out.center;
    std::sort(values.begin(), values.end());
    for (double t : thresholds) {
        const auto it = std::lower_bound(values.begin(), values.end(), t);
        TailPoint pt;
        pt.threshold = t;
        pt.count = static_cast<std::uint64_t>(values.end() - it);
        pt.probability = static_cast<double>(pt.count) / static_cast<double>(plan.samples);
        std::tie(pt.ci_low, pt.ci_high) = wilson_interval(pt.count, plan.samples, out.confidence);
        out.points.push_back(pt);
    }
    return out;
}

ScalingFit scaling_fit(std::span<const double> dimensions, std::span<const double> variances) {
    if (dimensions.size() != variances.size()) throw DomainError("scaling_fit: size mismatch");
    if (dimensions.size() < 3) throw DomainError("scaling_fit needs at least 3 points");
    const std::size_t k = dimensions.size();
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(dimensions[i] > 0.0)) throw DomainError("scaling_fit: dimensions must be positive");
        if (!(variances[i] > 0.0) || !std::isfinite(variances[i])) {
            throw DomainError("scaling_fit: variances must be positive and finite");
        }
        lx[i] = std::log(dimensions[i]);
        ly[i] = std::log(variances[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw DomainError("scaling_fit: dimensions must not all coincide");
    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.slope_se = std::sqrt(ss_res / static_cast<double>(k - 2) / sxx);
    return fit;
}

nlohmann::json to_json(const VarianceEstimate& v) {
    return {{"mean", v.mean},
            {"variance", v.variance},
            {"ci_low", v.ci_low},
            {"ci_high", v.ci_high},
            {"batch_median_variance", v.batch_median_variance},
            {"n_samples", v.n_samples},
            {"seed", v.seed},
            {"batches", v.batches}};
}

nlohmann::json to_json(const Interval95& i) {
    return {{"value", i.value}, {"ci_low", i.ci_low}, {"ci_high", i.ci_high}};
}

nlohmann::json to_json(const GradientMoment& g) {
    nlohmann::json j{{"q", g.q}, {"norm", to_json(g.norm)}, {"coordinate_sum", to_json(g.coordinate_sum)}};
    if (!g.per_coordinate.empty()) j["per_coordinate"] = g.per_coordinate;
    return j;
}

nlohmann::json to_json(const TailEstimate& t) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : t.points) {
        pts.push_back({{"threshold", p.threshold},
                       {"probability", p.probability},
                       {"ci_low", p.ci_low},
                       {"ci_high", p.ci_high},
                       {"count", p.count}});
    }
    return {{"center", t.center}, {"n_samples", t.n_samples}, {"confidence", t.confidence}, {"points", pts}};
}

nlohmann::json to_json(const ScalingFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"slope_se", f.slope_se}};
}

}  // namespace htc
