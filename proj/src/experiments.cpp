#include "htc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "htc/cheeger.hpp"
#include "htc/constants.hpp"
#include "htc/errors.hpp"
#include "htc/linalg.hpp"
#include "htc/quadrature.hpp"
#include "htc/quantile_lab.hpp"
#include "htc/rng.hpp"

namespace htc {

void ExperimentOutput::append(ExperimentOutput other) {
    for (auto& r : other.reports) reports.push_back(std::move(r));
    for (auto& [k, v] : other.data.items()) data[k] = std::move(v);
}

nlohmann::json SamplingConfig::describe() const {
    return {{"samples", samples}, {"seed", seed}, {"batches", batches}};
}

nlohmann::json PoincareCertificate::describe() const {
    return {{"alpha", alpha}, {"value", value}, {"source", source}};
}

std::string to_string(CertificateKind kind) { return kind == CertificateKind::c1 ? "C1" : "C2"; }

namespace {

std::string fmt(double x) { return format_double(x); }

EstimationPlan make_plan(MeasurePtr measure, LipschitzFnPtr fn, std::size_t n, const SamplingConfig& s) {
    EstimationPlan plan;
    plan.measure = std::move(measure);
    plan.function = std::move(fn);
    plan.dimension = n;
    plan.samples = s.samples;
    plan.seed = s.seed;
    plan.batches = s.batches;
    plan.threads = s.threads;
    return plan;
}

nlohmann::json variance_row(double n, const VarianceEstimate& v, double bound) {
    return {{"n", n},
            {"variance", v.variance},
            {"ci_low", v.ci_low},
            {"ci_high", v.ci_high},
            {"batch_median_variance", v.batch_median_variance},
            {"bound", bound}};
}

const PoincareCertificate& require_certificate(const std::optional<PoincareCertificate>& c, const char* who) {
    if (!c) throw DomainError(std::string(who) + " needs a certified Poincare constant");
    if (!(c->value > 0.0) || !std::isfinite(c->value)) {
        throw DomainError(std::string(who) + ": certificate value must be positive and finite");
    }
    if (!(c->alpha > 0.0 && c->alpha < 1.0)) {
        throw DomainError(std::string(who) + " requires a certificate exponent 0 < alpha < 1, got alpha = " +
                          fmt(c->alpha));
    }
    return *c;
}

void require_measure(const MeasurePtr& m, const char* who) {
    if (!m) throw DomainError(std::string(who) + " needs a measure");
}

double pareto_variance(double lambda) {
    const double m1 = (lambda - 1.0) / (lambda - 2.0);
    return (lambda - 1.0) / (lambda - 3.0) - m1 * m1;
}

nlohmann::json bound_json(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
}

nlohmann::json box_json(const Box& b) {
    nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
    for (double x : b.lo) lo.push_back(bound_json(x));
    for (double x : b.hi) hi.push_back(bound_json(x));
    return {{"lo", lo}, {"hi", hi}};
}

// Gradient moments enter the rhs at the lower end of their interval.
double lower_moment(const Interval95& i) { return std::max(0.0, i.ci_low); }

// The largest eigenvalue index i of the symmetric matrix whose packed upper triangle is x.
class EigenvalueFn final : public LipschitzFn {
public:
    EigenvalueFn(std::size_t order, std::size_t index) : order_(order), index_(index) {}

    std::string name() const override { return "eigenvalue"; }
    std::size_t arity() const override { return SymMatrix::packed_size(order_); }
    double eval(std::span<const double> x) const override {
        SymMatrix m(order_, std::vector<double>(x.begin(), x.end()));
        return eigenvalues(m)[index_ - 1];
    }
    void grad(std::span<const double>, std::span<double>) const override {
        throw NumericalError("eigenvalue gradient is not provided");
    }
    double metric() const override { return 2.0; }
    // Hoffman-Wielandt with off-diagonal entries counted twice.
    double lipschitz_constant() const override { return std::numbers::sqrt2; }
    nlohmann::json describe() const override {
        return {{"name", "eigenvalue"}, {"order", order_}, {"index", index_}};
    }

private:
    std::size_t order_;
    std::size_t index_;
};

}  // namespace

// ---------------------------------------------------------------------------------------------

ExperimentOutput verify_pareto_theorem(const ParetoTheoremConfig& config) {
    const double lambda = config.lambda;
    if (!(lambda > 3.0) || !std::isfinite(lambda)) {
        throw DomainError("Pareto variance theorem requires lambda > 3, got lambda = " + fmt(lambda));
    }
    if (config.dims.empty()) throw DomainError("verify_pareto_theorem needs at least one dimension");
    const double C = pareto_C_lambda(lambda).value;
    const double exponent = 2.0 / (lambda - 1.0);
    const auto measure = pareto_measure({lambda});

    ExperimentOutput out;
    out.data["pareto_theorem"] = nlohmann::json::array();
    std::vector<double> ns, vars;
    for (std::size_t n : config.dims) {
        const auto fn = make_function(config.function, n);
        if (!fn->lipschitz_wrt(2.0) || fn->lipschitz_constant() > 1.0) {
            throw DomainError("Pareto variance theorem covers Euclidean 1-Lipschitz functions; " + fn->name() +
                              " is not");
        }
        const auto est = estimate_variance(make_plan(measure, fn, n, config.sampling));
        const double bound = C * std::pow(static_cast<double>(n), exponent);
        nlohmann::json cfg{{"lambda", lambda},
                           {"n", n},
                           {"function", fn->describe()},
                           {"C_lambda", C},
                           {"batch_median_variance", est.batch_median_variance},
                           {"sampling", config.sampling.describe()}};
        out.reports.push_back(make_report("pareto_theorem/n=" + std::to_string(n), est.variance, est.ci_low,
                                          est.ci_high, bound, std::move(cfg)));
        out.data["pareto_theorem"].push_back(variance_row(static_cast<double>(n), est, bound));
        ns.push_back(static_cast<double>(n));
        vars.push_back(est.variance);
        if (n == 1) {
            out.reports.push_back(make_exact_report("pareto_theorem/n=1/analytic", pareto_variance(lambda), C,
                                                    {{"lambda", lambda}}));
        }
    }
    if (ns.size() >= 3) {
        const auto fit = scaling_fit(ns, vars);
        out.reports.push_back(make_exact_report("pareto_theorem/slope", fit.slope, exponent,
                                                {{"lambda", lambda},
                                                 {"fit", to_json(fit)},
                                                 {"dims", config.dims},
                                                 {"function", config.function}},
                                                config.slope_tolerance, Comparison::equality));
        out.data["pareto_theorem_fit"] = to_json(fit);
    }
    return out;
}

ExperimentOutput pareto_one_dimensional_checks(const std::vector<double>& lambdas) {
    ExperimentOutput out;
    for (double lambda : lambdas) {
        const double C = pareto_C_lambda(lambda).value;
        out.reports.push_back(make_exact_report("pareto_theorem/n=1/lambda=" + fmt(lambda), pareto_variance(lambda),
                                                C, {{"lambda", lambda}, {"C_lambda", C}}));
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

PoincareCertificate l2_certificate(double cheeger_alpha, double cheeger) {
    const auto c = C2_theorem_constant(cheeger_alpha, cheeger);
    return {(3.0 * cheeger_alpha - 2.0) / cheeger_alpha, c.value,
            "C2(alpha=" + fmt(cheeger_alpha) + ", I=" + fmt(cheeger) + ")"};
}

PoincareCertificate l1_certificate(double cheeger_alpha, double cheeger) {
    const auto c = C1_theorem_constant(cheeger_alpha, 2.0, cheeger);
    return {3.0 * cheeger_alpha - 2.0, c.value,
            "C1(alpha=" + fmt(cheeger_alpha) + ", beta=2, I=" + fmt(cheeger) + ")"};
}

ExperimentOutput verify_product_theorem(const ProductTheoremConfig& config) {
    require_measure(config.measure, "product theorem check");
    const auto& cert = require_certificate(config.certificate, "product theorem check");
    const std::size_t n = config.n;
    const auto fn = make_function(config.function, n);
    if (!fn->lipschitz_wrt(2.0) || fn->lipschitz_constant() > 1.0) {
        throw DomainError("product theorem covers Euclidean 1-Lipschitz functions; " + fn->name() + " is not");
    }
    const auto pass = run_pass(make_plan(config.measure, fn, n, config.sampling), 2.0);
    const auto& v = pass.variance;
    const auto& g = *pass.gradient;
    const double rhs = cert.value * std::pow(static_cast<double>(n), 1.0 - cert.alpha) *
                       std::pow(lower_moment(g.norm), cert.alpha);
    ExperimentOutput out;
    nlohmann::json cfg{{"measure", config.measure->describe()},
                       {"certificate", cert.describe()},
                       {"function", fn->describe()},
                       {"n", n},
                       {"grad_sq_moment", to_json(g)},
                       {"batch_median_variance", v.batch_median_variance},
                       {"sampling", config.sampling.describe()}};
    out.reports.push_back(
        make_report("product_theorem/n=" + std::to_string(n), v.variance, v.ci_low, v.ci_high, rhs, std::move(cfg)));
    out.data["product_theorem"] = nlohmann::json::array({variance_row(static_cast<double>(n), v, rhs)});
    return out;
}

ExperimentOutput verify_dp_theorem(const DpTheoremConfig& config) {
    require_measure(config.measure, "d_p theorem check");
    const auto& cert = require_certificate(config.certificate, "d_p theorem check");
    const double p = config.p;
    if (config.kind == CertificateKind::c1 && !(p > 1.0)) {
        throw DomainError("d_p theorem (C1 branch) requires 1 < p <= inf, got p = " + fmt(p));
    }
    if (config.kind == CertificateKind::c2 && !(p > 1.0 && p <= 2.0)) {
        throw DomainError("d_p theorem (C2 branch) requires 1 < p <= 2, got p = " + fmt(p));
    }
    const std::size_t n = config.n;
    const auto fn = make_function(config.function, n);
    if (!fn->lipschitz_wrt(p) || fn->lipschitz_constant() > 1.0) {
        throw DomainError("metric mismatch: " + fn->name() + " is declared for d_" + fmt(fn->metric()) +
                          ", which does not make it 1-Lipschitz for d_" + fmt(p));
    }
    const double conj = std::isinf(p) ? 1.0 : p / (p - 1.0);
    const double inv_conj = 1.0 / conj;  // (p-1)/p
    const double e = (config.kind == CertificateKind::c1 ? 1.0 : 2.0) * cert.alpha * inv_conj;
    const auto pass = run_pass(make_plan(config.measure, fn, n, config.sampling), conj, true);
    const auto& v = pass.variance;
    const auto& g = *pass.gradient;
    const double rhs =
        cert.value * std::pow(static_cast<double>(n), 1.0 - e) * std::pow(lower_moment(g.coordinate_sum), e);
    ExperimentOutput out;
    nlohmann::json cfg{{"measure", config.measure->describe()},
                       {"kind", to_string(config.kind)},
                       {"certificate", cert.describe()},
                       {"p", bound_json(p)},
                       {"function", fn->describe()},
                       {"n", n},
                       {"exponent", e},
                       {"coordinate_moment_sum", to_json(g.coordinate_sum)},
                       {"batch_median_variance", v.batch_median_variance},
                       {"sampling", config.sampling.describe()}};
    const std::string id = "dp_theorem/" + to_string(config.kind) + "/p=" + fmt(p) + "/n=" + std::to_string(n);
    out.reports.push_back(make_report(id, v.variance, v.ci_low, v.ci_high, rhs, std::move(cfg)));
    out.data["dp_theorem"] = nlohmann::json::array({variance_row(static_cast<double>(n), v, rhs)});
    return out;
}

// ---------------------------------------------------------------------------------------------

double tail_bound(double alpha, double cheeger, double t) {
    if (!(cheeger > 0.0)) throw DomainError("tail bound needs a positive Cheeger value");
    if (alpha == 1.0) return 0.5 * std::exp(-t / cheeger);
    const auto ab = extremal_constants(alpha, cheeger);
    return 0.5 * std::pow(ab[0].value * t + 1.0, 1.0 - ab[1].value);
}

ExperimentOutput verify_tail_bounds(const TailBoundConfig& config) {
    require_measure(config.measure, "tail bound check");
    const auto& mu = *config.measure;
    const double alpha = config.alpha;
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("tail bounds require 0 < alpha <= 1, got alpha = " + fmt(alpha));
    }
    std::optional<double> cheeger = config.cheeger ? config.cheeger : mu.analytic_cheeger(alpha);
    if (!cheeger) {
        throw DomainError("tail bound check needs a certified alpha-Cheeger value for " + mu.name() +
                          " at alpha = " + fmt(alpha));
    }
    for (double t : config.thresholds) {
        if (!(t >= 0.0)) throw DomainError("tail thresholds must be non-negative");
    }
    auto plan = make_plan(config.measure, make_function("identity", 1), 1, config.sampling);
    const auto tails = estimate_tail(plan, config.thresholds, true, config.bonferroni);
    const double median = mu.quantile(0.5);

    ExperimentOutput out;
    out.data["tails"] = nlohmann::json::array();
    for (const auto& pt : tails.points) {
        const double bound = tail_bound(alpha, *cheeger, pt.threshold);
        const double exact = mu.survival(median + pt.threshold);
        const bool attained = exact >= bound * (1.0 - 1e-9);
        nlohmann::json cfg{{"measure", mu.describe()},
                           {"alpha", alpha},
                           {"cheeger", *cheeger},
                           {"t", pt.threshold},
                           {"exact_tail", exact},
                           {"empirical_median", tails.center},
                           {"confidence", tails.confidence},
                           {"count", pt.count},
                           {"sampling", config.sampling.describe()}};
        out.reports.push_back(make_report("tails/" + mu.name() + "/t=" + fmt(pt.threshold), pt.probability,
                                          pt.ci_low, pt.ci_high, bound, std::move(cfg),
                                          attained ? Comparison::equality : Comparison::upper_bound));
        out.data["tails"].push_back({{"t", pt.threshold},
                                     {"probability", pt.probability},
                                     {"ci_low", pt.ci_low},
                                     {"ci_high", pt.ci_high},
                                     {"exact", exact},
                                     {"bound", bound}});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

std::optional<double> known_poincare_constant(const Measure& measure) {
    const auto d = measure.describe();
    const auto name = d.value("name", std::string());
    if (name == "laplace") {
        const double t = d.at("t").get<double>();
        return 4.0 / (t * t);
    }
    if (name == "uniform") {
        const double w = d.at("hi").get<double>() - d.at("lo").get<double>();
        return w * w / (std::numbers::pi * std::numbers::pi);
    }
    return std::nullopt;
}

double box_measure(const Measure& measure, const Box& box) {
    if (box.lo.size() != box.hi.size()) throw DomainError("box bounds differ in dimension");
    const double median = measure.quantile(0.5);
    double mass = 1.0;
    for (std::size_t i = 0; i < box.dimension(); ++i) {
        const double lo = box.lo[i], hi = box.hi[i];
        if (!(lo <= hi)) throw DomainError("box has lo > hi in coordinate " + std::to_string(i));
        // Upper-tail masses via the survival function keep relative precision.
        const double m = lo >= median ? measure.survival(lo) - measure.survival(hi) : measure.cdf(hi) - measure.cdf(lo);
        mass *= std::max(0.0, m);
    }
    return mass;
}

ExperimentOutput verify_isoperimetric(const IsoperimetricConfig& config) {
    require_measure(config.measure, "isoperimetric check");
    const auto& cert = require_certificate(config.certificate, "isoperimetric check");
    const std::size_t n = config.a.dimension();
    if (n == 0 || config.b.dimension() != n) throw DomainError("isoperimetric check needs boxes of equal dimension");
    const double ma = box_measure(*config.measure, config.a);
    const double mb = box_measure(*config.measure, config.b);
    if (!(ma > 0.0) || !(mb > 0.0)) throw DomainError("isoperimetric check needs boxes of positive measure");
    const double d = box_gap(config.a, config.b);
    const double rhs = std::pow(static_cast<double>(n), (1.0 - cert.alpha) / 2.0) * std::sqrt(cert.value / (ma * mb));
    ExperimentOutput out;
    nlohmann::json cfg{{"measure", config.measure->describe()},
                       {"certificate", cert.describe()},
                       {"n", n},
                       {"a", box_json(config.a)},
                       {"b", box_json(config.b)},
                       {"measure_a", ma},
                       {"measure_b", mb}};
    out.reports.push_back(
        make_exact_report("isoperimetric/n=" + std::to_string(n), d, rhs, std::move(cfg), 1e-12 * std::max(1.0, rhs)));
    return out;
}

// ---------------------------------------------------------------------------------------------

ExperimentOutput verify_sharp_poincare_dp(const SharpPoincareConfig& config) {
    require_measure(config.measure, "sharp d_p check");
    const auto& mu = *config.measure;
    const double p = config.p;
    if (!(p > 1.0 && p <= 2.0)) throw DomainError("sharp d_p bound requires 1 < p <= 2, got p = " + fmt(p));
    const auto cp = config.poincare_constant ? config.poincare_constant : known_poincare_constant(mu);
    if (!cp) throw DomainError("sharp d_p check needs the classical Poincare constant of " + mu.name());
    const auto moments = mu.analytic_moments();
    if (!moments || !std::isfinite(moments->variance)) {
        throw DomainError("sharp d_p check needs a measure with known finite variance");
    }
    const double conj = p / (p - 1.0);
    const double var_exponent = 1.0 - 2.0 / conj;  // 1 - 2(p-1)/p
    const double bound_exponent = (2.0 - p) / p;

    ExperimentOutput out;
    out.data["sharp_dp"] = nlohmann::json::array();
    std::vector<double> ns, vars;
    for (std::size_t n : config.dims) {
        const auto fn = scaled_sum_fn(n, p);
        const auto pass = run_pass(make_plan(config.measure, fn, n, config.sampling), conj);
        const auto& v = pass.variance;
        const auto& g = *pass.gradient;
        const double nn = static_cast<double>(n);
        const double exact = std::pow(nn, var_exponent) * moments->variance;
        const double bound = *cp * std::pow(nn, bound_exponent) * std::pow(lower_moment(g.coordinate_sum), 2.0 / conj);
        nlohmann::json cfg{{"measure", mu.describe()},
                           {"p", p},
                           {"n", n},
                           {"poincare_constant", *cp},
                           {"coordinate_moment_sum", to_json(g.coordinate_sum)},
                           {"batch_median_variance", v.batch_median_variance},
                           {"sampling", config.sampling.describe()}};
        const std::string suffix = "/p=" + fmt(p) + "/n=" + std::to_string(n);
        out.reports.push_back(
            make_report("sharp_dp/exact" + suffix, v.variance, v.ci_low, v.ci_high, exact, cfg, Comparison::equality));
        out.reports.push_back(make_report("sharp_dp/bound" + suffix, v.variance, v.ci_low, v.ci_high, bound, cfg));
        auto row = variance_row(nn, v, bound);
        row["exact"] = exact;
        out.data["sharp_dp"].push_back(std::move(row));
        ns.push_back(nn);
        vars.push_back(v.variance);
    }
    if (ns.size() >= 3) {
        const auto fit = scaling_fit(ns, vars);
        out.reports.push_back(make_exact_report("sharp_dp/slope/p=" + fmt(p), fit.slope, bound_exponent,
                                                {{"p", p}, {"fit", to_json(fit)}, {"dims", config.dims}},
                                                config.slope_tolerance, Comparison::equality));
        out.data["sharp_dp_fit"] = to_json(fit);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

ExperimentOutput verify_random_matrix(const RandomMatrixConfig& config) {
    const double lambda = config.lambda;
    if (!(lambda > 3.0) || !std::isfinite(lambda)) {
        throw DomainError("random matrix theorem requires lambda > 3, got lambda = " + fmt(lambda));
    }
    const std::size_t n = config.n;
    if (n < 2) throw DomainError("random matrix check requires n >= 2 (the displayed bound vanishes at n = 1)");
    if (n > 256) throw DomainError("random matrix check is limited to n <= 256");
    if (config.trials < 100) throw DomainError("random matrix check needs at least 100 trials");
    if (config.eigen_index < 1 || config.eigen_index > n) {
        throw DomainError("eigenvalue index must lie in [1, n]");
    }
    const double C = pareto_C_lambda(lambda).value;
    const double e = 2.0 / (lambda - 1.0);
    const double nn = static_cast<double>(n);
    const double off = nn * (nn - 1.0) / 2.0;
    const double all = nn * (nn + 1.0) / 2.0;

    EstimationPlan plan;
    plan.measure = pareto_measure({lambda});
    plan.function = std::make_shared<EigenvalueFn>(n, config.eigen_index);
    plan.dimension = SymMatrix::packed_size(n);
    plan.samples = config.trials;
    plan.seed = config.seed;
    plan.batches = config.batches;
    plan.threads = config.threads;
    const auto v = estimate_variance(plan);

    nlohmann::json cfg{{"lambda", lambda},
                       {"n", n},
                       {"trials", config.trials},
                       {"eigen_index", config.eigen_index},
                       {"seed", config.seed},
                       {"batches", config.batches},
                       {"C_lambda", C},
                       {"batch_median_variance", v.batch_median_variance}};
    const std::string id = "random_matrix/n=" + std::to_string(n) + "/i=" + std::to_string(config.eigen_index);
    ExperimentOutput out;
    const double rhs = 2.0 * C * std::pow(off, e);
    const double rhs_all = 2.0 * C * std::pow(all, e);
    out.reports.push_back(make_report(id, v.variance, v.ci_low, v.ci_high, rhs, cfg));
    cfg["dimension_count"] = "n(n+1)/2";
    out.reports.push_back(make_report(id + "/with_diagonal", v.variance, v.ci_low, v.ci_high, rhs_all, cfg));
    auto row = variance_row(nn, v, rhs);
    row["bound_with_diagonal"] = rhs_all;
    out.data["random_matrix"] = nlohmann::json::array({row});
    return out;
}

ExperimentOutput hoffman_wielandt_battery(std::size_t n, std::size_t pairs, std::uint64_t seed) {
    if (n < 1 || pairs < 1) throw DomainError("Hoffman-Wielandt battery needs n >= 1 and pairs >= 1");
    const CounterStream stream(seed);
    const boost::math::normal normal;
    const std::size_t k = SymMatrix::packed_size(n);
    auto draw = [&](std::uint64_t base) {
        std::vector<double> v(k);
        for (std::size_t j = 0; j < k; ++j) v[j] = boost::math::quantile(normal, stream.uniform(base + j));
        return SymMatrix(n, std::move(v));
    };
    ExperimentOutput out;
    out.data["hoffman_wielandt"] = nlohmann::json::array();
    double worst = 0.0;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto a = draw(2 * i * k), b = draw((2 * i + 1) * k);
        const auto r = hoffman_wielandt_check(a, b);
        if (r.verdict != Verdict::pass) ++failures;
        worst = std::max(worst, r.lhs / r.rhs);
        out.data["hoffman_wielandt"].push_back({{"pair", i}, {"lhs", r.lhs}, {"rhs", r.rhs}});
    }
    auto rep = make_exact_report("hoffman_wielandt/n=" + std::to_string(n), worst, 1.0,
                                 {{"n", n}, {"pairs", pairs}, {"seed", seed}, {"failures", failures}});
    if (failures > 0) rep.verdict = Verdict::fail;
    out.reports.push_back(std::move(rep));
    return out;
}

// ---------------------------------------------------------------------------------------------

RampMoments ramp_moments(double alpha, double m) {
    if (!(alpha > 2.0 / 3.0 && alpha < 1.0)) {
        throw DomainError("tightness construction requires 2/3 < alpha < 1 (lambda = 1/(1-alpha) > 3), got alpha = " +
                          fmt(alpha));
    }
    if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("ramp location m must be >= 1");
    const double l = 1.0 / (1.0 - alpha);
    RampMoments r;
    r.m = m;
    r.mean = std::pow(m, 2.0 - l) / (l - 2.0);
    r.second = 2.0 * std::pow(m, 3.0 - l) / ((l - 2.0) * (l - 3.0));
    r.variance = r.second - r.mean * r.mean;
    r.grad_first = std::pow(m, 1.0 - l);
    r.grad_second = r.grad_first;
    const double q_half = std::pow(2.0, 1.0 / (l - 1.0));
    r.median = std::max(0.0, q_half - m);
    if (r.median == 0.0) {
        r.abs_dev = r.mean;
    } else {
        // f = x - m above m, 0 below; |f - med| integrated piecewise.
        const double c = m + r.median;  // = q_half
        const auto density = [l](double x) { return (l - 1.0) * std::pow(x, -l); };
        const double below = r.median * (1.0 - std::pow(m, 1.0 - l));
        const double mid = integrate([&](double x) { return (c - x) * density(x); }, m, c, 1e-14).value;
        const double up = integrate([&](double x) { return (x - c) * density(x); }, c, kInf, 1e-14).value;
        r.abs_dev = below + mid + up;
    }
    return r;
}

ExperimentOutput tightness_report(const TightnessConfig& config) {
    const double alpha = config.alpha;
    const double l = 1.0 / (1.0 - alpha);
    if (config.ms.size() < 3) throw DomainError("tightness report needs at least 3 values of m");
    const double a1_min = (3.0 * alpha - 2.0) / alpha;
    const double a2_min = (2.0 * alpha - 1.0) / alpha;
    if (!(config.alpha1 > a1_min)) {
        throw DomainError("divergence demonstration needs alpha1 > (3 alpha - 2)/alpha = " + fmt(a1_min));
    }
    if (!(config.alpha2 > a2_min)) {
        throw DomainError("divergence demonstration needs alpha2 > (2 alpha - 1)/alpha = " + fmt(a2_min));
    }
    const auto measure = pareto_measure({l});
    const auto density = [&](double x) { return measure->density(x); };

    ExperimentOutput out;
    out.data["tightness"] = nlohmann::json::array();
    std::vector<double> vars, grads, ratio1, ratio2;
    for (double m : config.ms) {
        const auto r = ramp_moments(alpha, m);
        const double scale = r.mean;
        const double q_mean = integrate([&](double x) { return (x - m) * density(x); }, m, kInf, 1e-13 * scale).value;
        const double q_second =
            integrate([&](double x) { return (x - m) * (x - m) * density(x); }, m, kInf, 1e-13 * r.second).value;
        const double q_grad = integrate(density, m, kInf, 1e-13 * r.grad_second).value;
        const double q_var = q_second - q_mean * q_mean;
        const std::string suffix = "/m=" + fmt(m);
        const nlohmann::json cfg{{"alpha", alpha}, {"lambda", l}, {"m", m}};
        const double tol = config.closed_form_tolerance;
        auto check = [&](const std::string& what, double quad, double closed) {
            out.reports.push_back(make_exact_report("tightness/closed_form/" + what + suffix, quad, closed, cfg,
                                                    tol * std::abs(closed), Comparison::equality));
        };
        check("mean", q_mean, r.mean);
        check("second_moment", q_second, r.second);
        check("variance", q_var, r.variance);
        check("grad_sq", q_grad, r.grad_second);
        vars.push_back(r.variance);
        grads.push_back(r.grad_second);
        ratio1.push_back(r.variance / std::pow(r.grad_second, config.alpha1));
        ratio2.push_back(r.abs_dev / std::pow(r.grad_first, config.alpha2));
        out.data["tightness"].push_back({{"m", m},
                                         {"mean", r.mean},
                                         {"second_moment", r.second},
                                         {"variance", r.variance},
                                         {"grad_first", r.grad_first},
                                         {"grad_sq", r.grad_second},
                                         {"median", r.median},
                                         {"abs_dev", r.abs_dev},
                                         {"ratio_alpha1", ratio1.back()},
                                         {"ratio_alpha2", ratio2.back()}});
    }
    const auto var_fit = scaling_fit(config.ms, vars);
    const auto grad_fit = scaling_fit(config.ms, grads);
    const double var_slope = -(3.0 * alpha - 2.0) / (1.0 - alpha);
    const double grad_slope = -alpha / (1.0 - alpha);
    const nlohmann::json base{{"alpha", alpha}, {"lambda", l}, {"ms", config.ms}};
    auto with = [&](nlohmann::json extra) {
        nlohmann::json j = base;
        for (auto& [k, v] : extra.items()) j[k] = v;
        return j;
    };
    out.reports.push_back(make_exact_report("tightness/variance_slope", var_fit.slope, var_slope,
                                            with({{"fit", to_json(var_fit)}}),
                                            config.slope_tolerance * std::abs(var_slope), Comparison::equality));
    out.reports.push_back(make_exact_report("tightness/grad_sq_slope", grad_fit.slope, grad_slope,
                                            with({{"fit", to_json(grad_fit)}}),
                                            config.slope_tolerance * std::abs(grad_slope), Comparison::equality));

    // Strict growth along the m grid: the largest step ratio r_k / r_{k+1} must stay below 1.
    auto divergence = [&](const std::string& id, const std::vector<double>& ratios, nlohmann::json extra) {
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < ratios.size(); ++k) worst = std::max(worst, ratios[k] / ratios[k + 1]);
        extra["ratios"] = ratios;
        out.reports.push_back(make_exact_report(id, worst, std::nextafter(1.0, 0.0), with(std::move(extra))));
    };
    divergence("tightness/divergence/alpha1=" + fmt(config.alpha1), ratio1,
               {{"alpha1", config.alpha1}, {"threshold", a1_min}});
    divergence("tightness/divergence/alpha2=" + fmt(config.alpha2), ratio2,
               {{"alpha2", config.alpha2}, {"threshold", a2_min}});
    return out;
}

// ---------------------------------------------------------------------------------------------

std::vector<SuiteJob> acceptance_jobs() {
    std::vector<SuiteJob> jobs;
    const double pareto_alpha = 0.8;
    const double pareto_I = std::pow(4.0, -0.8);

    jobs.push_back({"constants", [](std::uint64_t, unsigned) {
                        ExperimentOutput out;
                        const double c5 = pareto_C_lambda(5.0).value;
                        out.reports.push_back(make_exact_report("constants/C_lambda/lambda=5", c5, std::pow(2.0, 2.4),
                                                                {{"lambda", 5.0}}, 1e-12, Comparison::equality));
                        out.reports.push_back(make_exact_report("constants/C2/alpha=0.8/I=1",
                                                                C2_theorem_constant(0.8, 1.0).value, 64.0,
                                                                {{"alpha", 0.8}, {"cheeger", 1.0}}, 1e-12,
                                                                Comparison::equality));
                        const double cb = pareto_cheeger_bound(5.0).value;
                        out.reports.push_back(make_exact_report("constants/pareto_cheeger/lambda=5", cb,
                                                                std::pow(4.0, -0.8), {{"lambda", 5.0}}, 1e-12,
                                                                Comparison::equality));
                        return out;
                    }});
    jobs.push_back({"cheeger", [=](std::uint64_t, unsigned) {
                        ExperimentOutput out;
                        const auto mu = pareto_measure({5.0});
                        const auto scan = half_line_scan(*mu, pareto_alpha);
                        const auto grid = grid_bruteforce(*mu, pareto_alpha, 16);
                        out.reports.push_back(make_exact_report("cheeger/half_line/pareto5", scan.value, pareto_I,
                                                                to_json(scan), 1e-6, Comparison::equality));
                        out.reports.push_back(make_exact_report("cheeger/grid16/pareto5", grid.value, pareto_I,
                                                                to_json(grid), 0.05 * pareto_I, Comparison::equality));
                        return out;
                    }});
    jobs.push_back({"dq_saturation", [=](std::uint64_t, unsigned) {
                        ExperimentOutput out;
                        const auto q = tabulate(quantile_of(pareto_measure({5.0})), uniform_grid(0.6, 0.99, 400));
                        const auto check = quantile_derivative_check(q, pareto_alpha, pareto_I);
                        out.reports.push_back(check.report);
                        out.reports.push_back(make_exact_report(
                            "dq_bound/min_ratio", 0.999, check.min_ratio,
                            {{"min_ratio", check.min_ratio}, {"max_ratio", check.max_ratio}}));
                        return out;
                    }});
    jobs.push_back({"lemmas", [](std::uint64_t, unsigned) {
                        ExperimentOutput out;
                        out.reports = run_lemma_suite(LemmaSuiteConfig{});
                        return out;
                    }});
    jobs.push_back({"pareto_theorem", [](std::uint64_t seed, unsigned threads) {
                        ParetoTheoremConfig c;
                        c.sampling.seed = seed;
                        c.sampling.threads = threads;
                        auto out = verify_pareto_theorem(c);
                        out.append(pareto_one_dimensional_checks({4.0, 5.0, 7.0, 10.0}));
                        return out;
                    }});
    jobs.push_back({"tails", [=](std::uint64_t seed, unsigned threads) {
                        TailBoundConfig p;
                        p.measure = pareto_measure({5.0});
                        p.alpha = pareto_alpha;
                        p.cheeger = pareto_I;
                        p.sampling.seed = derive_seed(seed, "pareto");
                        p.sampling.threads = threads;
                        auto out = verify_tail_bounds(p);
                        TailBoundConfig l;
                        l.measure = laplace_measure(1.0);
                        l.alpha = 1.0;
                        l.thresholds = {0.0, 1.0, 2.0, 3.0};
                        l.sampling.seed = derive_seed(seed, "laplace");
                        l.sampling.threads = threads;
                        auto lap = verify_tail_bounds(l);
                        lap.data["tails_laplace"] = std::move(lap.data["tails"]);
                        lap.data.erase("tails");
                        out.append(std::move(lap));
                        return out;
                    }});
    jobs.push_back({"product_theorem", [=](std::uint64_t seed, unsigned threads) {
                        ProductTheoremConfig c;
                        c.measure = pareto_measure({5.0});
                        c.certificate = l2_certificate(pareto_alpha, pareto_I);
                        c.sampling.seed = seed;
                        c.sampling.threads = threads;
                        return verify_product_theorem(c);
                    }});
    jobs.push_back({"dp_theorem", [=](std::uint64_t seed, unsigned threads) {
                        DpTheoremConfig c;
                        c.measure = pareto_measure({5.0});
                        c.kind = CertificateKind::c1;
                        c.certificate = l1_certificate(pareto_alpha, pareto_I);
                        c.p = 1.5;
                        c.function = "scaled_sum:p=1.5";
                        c.sampling.seed = derive_seed(seed, "p=1.5");
                        c.sampling.threads = threads;
                        auto out = verify_dp_theorem(c);
                        DpTheoremConfig d = c;
                        d.p = kInf;
                        d.function = "max";
                        d.sampling.seed = derive_seed(seed, "p=inf");
                        auto inf = verify_dp_theorem(d);
                        inf.data.erase("dp_theorem");
                        out.append(std::move(inf));
                        return out;
                    }});
    jobs.push_back({"isoperimetric", [=](std::uint64_t, unsigned) {
                        const auto mu = pareto_measure({5.0});
                        IsoperimetricConfig c;
                        c.measure = mu;
                        c.certificate = l2_certificate(pareto_alpha, pareto_I);
                        c.a = Box{{1.0, 1.0}, {1.2, 1.2}};
                        c.b = Box{{3.0, 3.0}, {5.0, 5.0}};
                        auto out = verify_isoperimetric(c);
                        c.a = Box{{1.0}, {mu->quantile(0.25)}};
                        c.b = Box{{mu->quantile(0.75)}, {kInf}};
                        out.append(verify_isoperimetric(c));
                        return out;
                    }});
    jobs.push_back({"sharp_dp", [](std::uint64_t seed, unsigned threads) {
                        SharpPoincareConfig c;
                        c.measure = laplace_measure(1.0);
                        c.sampling.seed = seed;
                        c.sampling.threads = threads;
                        return verify_sharp_poincare_dp(c);
                    }});
    jobs.push_back({"random_matrix", [](std::uint64_t seed, unsigned threads) {
                        RandomMatrixConfig c;
                        c.seed = seed;
                        c.threads = threads;
                        auto out = verify_random_matrix(c);
                        out.append(hoffman_wielandt_battery(8, 100, derive_seed(seed, "hoffman_wielandt")));
                        return out;
                    }});
    jobs.push_back({"tightness", [](std::uint64_t, unsigned) { return tightness_report(TightnessConfig{}); }});
    return jobs;
}

std::vector<SuiteResult> run_suite(const std::vector<SuiteJob>& jobs, std::uint64_t master_seed, unsigned threads) {
    std::vector<SuiteResult> results(jobs.size());
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
    const unsigned inner = workers > 1 ? 1 : threads;

    auto run_one = [&](std::size_t i) {
        SuiteResult& r = results[i];
        r.name = jobs[i].name;
        r.seed = derive_seed(master_seed, jobs[i].name);
        try {
            r.output = jobs[i].run(r.seed, inner);
        } catch (const std::exception& e) {
            auto rep = make_exact_report(jobs[i].name + "/error", std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), {{"error", e.what()}});
            rep.verdict = Verdict::fail;
            r.output = ExperimentOutput{};
            r.output.reports.push_back(std::move(rep));
        }
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) run_one(i);
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

nlohmann::json to_json(const ExperimentOutput& out) {
    return {{"verdict", std::string(to_string(out.verdict()))},
            {"reports", to_json(std::span<const BoundReport>(out.reports))},
            {"data", out.data}};
}

}  // namespace htc
