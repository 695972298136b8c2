#include "htc/quantile_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "htc/constants.hpp"
#include "htc/errors.hpp"

namespace htc {
namespace {

double signed_pow(double y, double gamma) {
    return std::copysign(std::pow(std::abs(y), gamma), y);
}

std::string tag(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_alpha_open(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("quantile bound requires 0 < alpha < 1");
}

void check_cheeger(double cheeger) {
    if (!(std::isfinite(cheeger) && cheeger > 0.0)) throw DomainError("Cheeger value must be positive and finite");
}

// Bound (cheeger / min{x, 1-x})^(1/alpha) on the quantile derivative.
double dq_bound(double alpha, double cheeger, double x) {
    return std::pow(cheeger / std::min(x, 1.0 - x), 1.0 / alpha);
}

}  // namespace

QuantileFn quantile_of(const MeasurePtr& measure, double shift) {
    QuantileFn q;
    q.lower = [measure, shift](double p) { return measure->quantile(p) - shift; };
    q.upper = [measure, shift](double s) { return measure->upper_quantile(s) - shift; };
    q.survival = [measure, shift](double y) { return measure->survival(y + shift); };
    return q;
}

QuantileFn quantile_of(const MeasurePtr& measure, RealFn f, bool centered) {
    const double c = centered ? f(measure->quantile(0.5)) : 0.0;
    QuantileFn q;
    q.lower = [measure, f, c](double p) { return f(measure->quantile(p)) - c; };
    q.upper = [measure, f, c](double s) { return f(measure->upper_quantile(s)) - c; };
    return q;
}

QuantileFn ramp_quantile(const MeasurePtr& measure, double m, bool centered) {
    const double c = centered ? std::max(measure->quantile(0.5) - m, 0.0) : 0.0;
    QuantileFn q;
    q.lower = [measure, m, c](double p) { return std::max(measure->quantile(p) - m, 0.0) - c; };
    q.upper = [measure, m, c](double s) { return std::max(measure->upper_quantile(s) - m, 0.0) - c; };
    q.survival = [measure, m, c](double y) {
        if (y + c <= 0.0) return 1.0;
        return measure->survival(m + y + c);
    };
    return q;
}

QuantileFn centered(QuantileFn q) {
    const double c = q(0.5);
    QuantileFn out;
    out.lower = [lo = q.lower, c](double p) { return lo(p) - c; };
    out.upper = [up = q.upper, c](double s) { return up(s) - c; };
    if (q.survival) out.survival = [sv = q.survival, c](double y) { return sv(y + c); };
    return out;
}

RealFn power_tail(const QuantileFn& q, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("power_tail requires gamma > 0");
    if (q.survival) {
        return [sv = q.survival, gamma](double t) {
            if (t <= 0.0) return sv(0.0);
            return sv(std::pow(t, 1.0 / gamma));
        };
    }
    // P(f >= y) = sup{s : Q(1 - s) >= y}; bisection in log s.
    return [up = q.upper, gamma](double t) {
        const double y = t <= 0.0 ? 0.0 : std::pow(t, 1.0 / gamma);
        double lo = std::log(1e-300);
        double hi = std::log(0.5);
        if (up(std::exp(hi)) >= y) {
            // the threshold sits at or below the median; resolve on (1/2, 1)
            double a = 0.5, b = 1.0;
            for (int i = 0; i < 64; ++i) {
                const double mid = 0.5 * (a + b);
                (up(mid) >= y ? a : b) = mid;
            }
            return a;
        }
        if (up(std::exp(lo)) < y) return 0.0;
        for (int i = 0; i < 64; ++i) {
            const double mid = 0.5 * (lo + hi);
            (up(std::exp(mid)) >= y ? lo : hi) = mid;
        }
        return std::exp(lo);
    };
}

QuantileFn EmpiricalQuantile::as_function() const {
    if (grid.size() < 2 || grid.size() != values.size()) {
        throw DomainError("EmpiricalQuantile needs at least two grid points with matching values");
    }
    auto interp = [g = grid, v = values](double p) {
        if (p <= g.front()) return v.front();
        if (p >= g.back()) return v.back();
        const auto it = std::upper_bound(g.begin(), g.end(), p);
        const std::size_t k = static_cast<std::size_t>(it - g.begin()) - 1;
        const double w = (p - g[k]) / (g[k + 1] - g[k]);
        return v[k] + w * (v[k + 1] - v[k]);
    };
    QuantileFn q;
    q.lower = interp;
    q.upper = [interp](double s) { return interp(1.0 - s); };
    return q;
}

std::vector<double> uniform_grid(double lo, double hi, int cells) {
    if (!(0.0 < lo && lo < hi && hi < 1.0) || cells < 1) {
        throw DomainError("uniform_grid requires 0 < lo < hi < 1 and at least one cell");
    }
    std::vector<double> g(cells + 1);
    for (int i = 0; i <= cells; ++i) g[i] = lo + (hi - lo) * i / cells;
    g.back() = hi;
    return g;
}

namespace {
void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) throw DomainError("quantile grid needs at least two points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw DomainError("quantile grid points must lie in (0, 1)");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("quantile grid must be strictly increasing");
    }
}
}  // namespace

EmpiricalQuantile tabulate(const QuantileFn& q, std::vector<double> grid) {
    check_grid(grid);
    EmpiricalQuantile e;
    e.values.reserve(grid.size());
    for (double p : grid) e.values.push_back(q(p));
    e.grid = std::move(grid);
    e.source = QuantileSource::analytic;
    return e;
}

EmpiricalQuantile empirical_from_sample(std::vector<double> sample, std::vector<double> grid, std::uint64_t seed) {
    check_grid(grid);
    if (sample.empty()) throw DomainError("empirical quantile needs a nonempty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    EmpiricalQuantile e;
    e.values.reserve(grid.size());
    for (double p : grid) {
        const double pn = p * n;
        const double k = std::round(pn);
        std::size_t idx;
        if (std::abs(pn - k) <= 1e-9 * std::max(1.0, pn) && k >= 1.0) {
            idx = static_cast<std::size_t>(k) - 1;
            const std::size_t next = std::min(idx + 1, sample.size() - 1);
            e.values.push_back(0.5 * (sample[idx] + sample[next]));
            continue;
        }
        idx = static_cast<std::size_t>(std::max(1.0, std::ceil(pn))) - 1;
        e.values.push_back(sample[std::min(idx, sample.size() - 1)]);
    }
    e.grid = std::move(grid);
    e.source = QuantileSource::sample;
    e.sample_size = sample.size();
    e.seed = seed;
    return e;
}

DerivativeCheck quantile_derivative_check(const EmpiricalQuantile& q, double alpha, double cheeger) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("quantile derivative bound requires 0 < alpha <= 1");
    check_cheeger(cheeger);
    check_grid(q.grid);
    const std::size_t cells = q.grid.size() - 1;
    if (cells < 64) throw DomainError("quantile derivative check needs at least 64 grid cells");

    DerivativeCheck out;
    out.ratios.reserve(cells);
    double worst_sound = -kInf;
    out.max_ratio = -kInf;
    out.min_ratio = kInf;
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = q.grid[i], b = q.grid[i + 1];
        const double slope = (q.values[i + 1] - q.values[i]) / (b - a);
        const double mid = 0.5 * (a + b);
        const double b_mid = dq_bound(alpha, cheeger, mid);
        const double b_worst = std::max(dq_bound(alpha, cheeger, a), dq_bound(alpha, cheeger, b));
        const double ratio = slope / b_mid;
        out.ratios.push_back(ratio);
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.worst_p = mid;
        }
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.grid_slack = std::max(out.grid_slack, b_worst / b_mid - 1.0);
        worst_sound = std::max(worst_sound, slope / b_worst);
    }
    nlohmann::json config{{"alpha", alpha},
                          {"cheeger", cheeger},
                          {"cells", cells},
                          {"p_range", {q.grid.front(), q.grid.back()}},
                          {"max_ratio", out.max_ratio},
                          {"min_ratio", out.min_ratio},
                          {"worst_p", out.worst_p},
                          {"grid_slack", out.grid_slack},
                          {"source", q.source == QuantileSource::analytic ? "analytic" : "sample"}};
    if (q.source == QuantileSource::sample) {
        config["sample_size"] = q.sample_size;
        config["seed"] = q.seed;
    }
    out.report = make_exact_report("dq_bound", worst_sound, 1.0, std::move(config), 1e-12);
    return out;
}

BoundReport ftc_tail_bound(const QuantileFn& q, double alpha, double cheeger, double t) {
    check_alpha_open(alpha);
    check_cheeger(cheeger);
    if (!(t > 0.5 && t < 1.0)) throw DomainError("quantile tail bound requires 1/2 < t < 1");
    const double lhs = q.upper(1.0 - t);
    const double median = q(0.5);
    if (std::abs(median) > 1e-9 * std::max(1.0, std::abs(lhs))) {
        throw DomainError("quantile tail bound requires a median-centered quantile (Q(1/2) = 0)");
    }
    const double rhs = std::pow(cheeger, 1.0 / alpha) * alpha / (1.0 - alpha) * std::pow(1.0 - t, 1.0 - 1.0 / alpha);
    return make_exact_report("ftc_tail", lhs, rhs,
                             {{"alpha", alpha}, {"cheeger", cheeger}, {"t", t}, {"ratio", lhs / rhs}},
                             1e-12 * rhs);
}

std::vector<double> truncate_half(std::span<const double> values) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](double v) { return std::clamp(v, -0.5, 0.5); });
    return out;
}

double quantile_expectation(const QuantileFn& q, const std::function<double(double)>& h) {
    const double lower = integrate_singular([&](double p) { return h(q.lower(p)); }, 0.0, 0.5).value;
    const double upper = integrate_singular([&](double s) { return h(q.upper(s)); }, 0.0, 0.5).value;
    return lower + upper;
}

BoundReport truncation_inequality_check(const QuantileFn& q, double alpha, double beta, double gamma,
                                        double cheeger) {
    const BoundConstants c1 = c1_constant(alpha, beta, gamma, cheeger);
    const double lhs = quantile_expectation(q, [beta](double y) { return std::pow(std::abs(y), beta); });
    const double truncated =
        quantile_expectation(q, [gamma](double y) { return std::min(std::pow(std::abs(y), gamma), 0.5); });
    const double exponent = 1.0 - beta * (1.0 - alpha) / alpha;
    const double rhs = c1.value * std::pow(truncated, exponent);
    return make_exact_report("truncation", lhs, rhs,
                             {{"alpha", alpha},
                              {"beta", beta},
                              {"gamma", gamma},
                              {"cheeger", cheeger},
                              {"c1", c1.value},
                              {"truncated_moment", truncated},
                              {"exponent", exponent}},
                             1e-9 * (std::abs(lhs) + std::abs(rhs)));
}

namespace {
void check_gamma_domain(double alpha, double gamma) {
    if (!(alpha > 0.5 && alpha < 1.0)) throw DomainError("G_gamma requires 1/2 < alpha < 1");
    if (!(gamma >= 1.0 && gamma < alpha / (1.0 - alpha))) {
        throw DomainError("G_gamma requires 1 <= gamma < alpha/(1-alpha)");
    }
}
}  // namespace

namespace {
// G_gamma at x = 1 - s.
double g_gamma_at_tail(double alpha, double gamma, double cheeger, double s) {
    return std::pow(cheeger, gamma / alpha) * std::pow(alpha / (1.0 - alpha), gamma) *
           std::pow(s, -gamma * (1.0 - alpha) / alpha);
}
}  // namespace

double g_gamma_majorant(double alpha, double gamma, double cheeger, double x) {
    check_gamma_domain(alpha, gamma);
    check_cheeger(cheeger);
    if (!(x >= 0.5 && x < 1.0)) throw DomainError("G_gamma is defined on [1/2, 1)");
    return g_gamma_at_tail(alpha, gamma, cheeger, 1.0 - x);
}

double g_gamma_derivative(double alpha, double gamma, double cheeger, double x) {
    return g_gamma_majorant(alpha, gamma, cheeger, x) * (gamma * (1.0 - alpha) / alpha) / (1.0 - x);
}

BoundReport g_gamma_derivative_check(const EmpiricalQuantile& q, double alpha, double gamma, double cheeger) {
    check_grid(q.grid);
    double worst = -kInf;
    double worst_p = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i + 1 < q.grid.size(); ++i) {
        const double a = q.grid[i], b = q.grid[i + 1];
        if (a < 0.5) continue;
        const double dq = signed_pow(q.values[i + 1], gamma) - signed_pow(q.values[i], gamma);
        const double dg = g_gamma_majorant(alpha, gamma, cheeger, b) - g_gamma_majorant(alpha, gamma, cheeger, a);
        const double ratio = dq / dg;
        ++used;
        if (ratio > worst) {
            worst = ratio;
            worst_p = 0.5 * (a + b);
        }
    }
    if (used == 0) throw DomainError("G_gamma check needs grid cells inside [1/2, 1)");
    return make_exact_report("g_gamma_derivative", worst, 1.0,
                             {{"alpha", alpha}, {"gamma", gamma}, {"cheeger", cheeger}, {"cells", used},
                              {"worst_p", worst_p}},
                             1e-9);
}

BoundReport gamma_tail_integral_check(const QuantileFn& q, double alpha, double gamma, double cheeger,
                                      std::span<const double> ps) {
    const LemmaConstants lc = c2_c3_c4_constants(alpha, 1.0, gamma, cheeger);
    if (ps.empty()) throw DomainError("tail integral check needs at least one p");
    const double e = (alpha + gamma * alpha - gamma) / alpha;
    double worst_ratio = -kInf, worst_lhs = 0.0, worst_rhs = 0.0, worst_p = 0.5;
    for (double p : ps) {
        if (!(p >= 0.5 && p < 1.0)) throw DomainError("tail integral check requires 1/2 <= p < 1");
        const double sigma = 1.0 - p;
        const double level = signed_pow(q.upper(sigma), gamma);
        const double lhs =
            integrate_singular([&](double s) { return signed_pow(q.upper(s), gamma) - level; }, 0.0, sigma).value;
        const double rhs = lc.c2.value * std::pow(sigma, e);
        if (lhs / rhs > worst_ratio) {
            worst_ratio = lhs / rhs;
            worst_lhs = lhs;
            worst_rhs = rhs;
            worst_p = p;
        }
    }
    return make_exact_report("gamma_tail_integral", worst_lhs, worst_rhs,
                             {{"alpha", alpha}, {"gamma", gamma}, {"cheeger", cheeger}, {"c2", lc.c2.value},
                              {"worst_p", worst_p}, {"ratio", worst_ratio}, {"points", ps.size()}},
                             1e-9 * worst_rhs);
}

HalfMassPoint half_mass_point_tail(const RealFn& g_of_s) {
    const double mass = integrate_singular(g_of_s, 0.0, 0.5).value;
    if (!std::isfinite(mass) || mass <= 0.0) {
        throw NumericalError("half_mass_point: g is not integrable on [1/2, 1) or has zero mass");
    }
    // F(sigma) = int_0^sigma g(s) ds - sigma g(sigma) grows from 0 to M on (0, 1/2].
    auto fraction = [&](double sigma) {
        const double part = integrate_singular(g_of_s, 0.0, sigma).value;
        return (part - sigma * g_of_s(sigma)) / mass;
    };
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (fraction(mid) < 0.5 ? lo : hi) = mid;
    }
    const double sigma = 0.5 * (lo + hi);
    HalfMassPoint h;
    h.p_value = 1.0 - sigma;
    h.mass = mass;
    h.residual = (fraction(sigma) - 0.5) * mass;
    return h;
}

HalfMassPoint half_mass_point(const RealFn& g) {
    return half_mass_point_tail([g](double s) { return g(1.0 - s); });
}

BoundReport half_mass_bound_check(const QuantileFn& q, double alpha, double gamma, double cheeger) {
    const LemmaConstants lc = c2_c3_c4_constants(alpha, 1.0, gamma, cheeger);
    const HalfMassPoint h = half_mass_point_tail([&](double s) { return signed_pow(q.upper(s), gamma); });
    const double lhs = lc.c3.value * std::pow(h.mass, alpha / (alpha + gamma * alpha - gamma));
    const double rhs = 1.0 - h.p_value;
    return make_exact_report("half_mass_bound", lhs, rhs,
                             {{"alpha", alpha}, {"gamma", gamma}, {"cheeger", cheeger}, {"c3", lc.c3.value},
                              {"mass", h.mass}, {"p_value", h.p_value}},
                             1e-9);
}

BoundReport main_l2_inequality_check(const RealFn& tail, double alpha, double beta, double gamma, double cheeger) {
    const LemmaConstants lc = c2_c3_c4_constants(alpha, beta, gamma, cheeger);
    const double mass = integrate(tail, 0.0, kInf).value;
    if (!std::isfinite(mass)) throw NumericalError("main L2 check: the tail integral M is infinite");
    const double powered = integrate([&](double t) { return std::pow(tail(t), beta); }, 0.0, kInf).value;
    const double e = (alpha * beta + gamma * alpha - gamma) / (alpha + gamma * alpha - gamma);
    const double lhs = lc.c4.value * std::pow(mass, e);
    return make_exact_report("main_l2", lhs, powered,
                             {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"cheeger", cheeger},
                              {"c4", lc.c4.value}, {"mass", mass}, {"exponent", e}},
                             beta == 1.0 ? 0.0 : 1e-9 * powered);
}

std::vector<BoundReport> run_lemma_suite(const LemmaSuiteConfig& config) {
    const MeasurePtr mu = pareto_measure({config.lambda});
    const double alpha = config.alpha;
    const double cheeger = config.cheeger.value_or(pareto_cheeger_bound(config.lambda).value);
    const nlohmann::json base{{"measure", mu->describe()}, {"alpha", alpha}, {"cheeger", cheeger}};

    struct Case {
        std::string name;
        QuantileFn q;
        nlohmann::json fn;
    };
    std::vector<Case> cases;
    cases.push_back({"identity", quantile_of(mu, mu->quantile(0.5)), {{"name", "identity"}}});
    for (double m : config.ramp_points) {
        cases.push_back({"ramp_m" + tag(m), ramp_quantile(mu, m, true), {{"name", "activation"}, {"m", m}}});
    }

    std::vector<BoundReport> out;
    auto add = [&](BoundReport r, const std::string& id, const Case& c) {
        r.theorem_id = "lemma." + r.theorem_id + "/" + id;
        nlohmann::json cfg = base;
        cfg["function"] = c.fn;
        cfg["check"] = r.config;
        r.config = std::move(cfg);
        out.push_back(std::move(r));
    };

    const std::vector<double> tail_ps{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
    for (const Case& c : cases) {
        add(quantile_derivative_check(tabulate(c.q, uniform_grid(0.01, 0.99, 1024)), alpha, cheeger).report, c.name,
            c);
        for (double t : {0.6, 0.75, 0.9, 0.99}) add(ftc_tail_bound(c.q, alpha, cheeger, t), c.name + "/t=" + tag(t), c);
        add(truncation_inequality_check(c.q, alpha, 1.0, 1.0, cheeger), c.name + "/beta=1/gamma=1", c);
        add(truncation_inequality_check(c.q, alpha, 2.0, 2.0, cheeger), c.name + "/beta=2/gamma=2", c);
        add(g_gamma_derivative_check(tabulate(c.q, uniform_grid(0.5, 0.995, 990)), alpha, 2.0, cheeger),
            c.name + "/gamma=2", c);
        add(gamma_tail_integral_check(c.q, alpha, 2.0, cheeger, tail_ps), c.name + "/gamma=2", c);
        add(half_mass_bound_check(c.q, alpha, 1.0, cheeger), c.name + "/gamma=1", c);
        add(half_mass_bound_check(c.q, alpha, 2.0, cheeger), c.name + "/gamma=2", c);
        const double beta = 1.0 / alpha;
        add(main_l2_inequality_check(power_tail(c.q, 1.0), alpha, 1.0, 1.0, cheeger), c.name + "/beta=1/gamma=1",
            c);
        add(main_l2_inequality_check(power_tail(c.q, 1.0), alpha, beta, 1.0, cheeger),
            c.name + "/beta=" + tag(beta) + "/gamma=1", c);
        add(main_l2_inequality_check(power_tail(c.q, 2.0), alpha, beta, 2.0, cheeger),
            c.name + "/beta=" + tag(beta) + "/gamma=2", c);
    }

    // Self-consistency of the half-mass point of G_gamma itself.
    const double gamma = 2.0;
    const double g_half = g_gamma_majorant(alpha, gamma, cheeger, 0.5);
    const HalfMassPoint h = half_mass_point_tail(
        [&](double s) { return g_gamma_at_tail(alpha, gamma, cheeger, s) - g_half; });
    BoundReport r = make_exact_report("lemma.half_mass_point/g_gamma/gamma=2", std::abs(h.residual), 1e-8,
                                      {{"measure", mu->describe()},
                                       {"alpha", alpha},
                                       {"cheeger", cheeger},
                                       {"gamma", gamma},
                                       {"p_value", h.p_value},
                                       {"mass", h.mass}});
    out.push_back(std::move(r));
    return out;
}

}  // namespace htc
