#include <doctest.h>

#include <cmath>
#include <random>

#include "htc/cheeger.hpp"
#include "htc/linalg.hpp"
#include "htc/lipschitz.hpp"
#include "htc/montecarlo.hpp"

using namespace htc;

namespace {

std::vector<LipschitzFnPtr> functions(std::size_t n) {
    return {max_fn(n), l2_norm_fn(n), scaled_sum_fn(n, 1.5), make_function("identity", n), constant_fn(n, 2.0),
            distance_to_set_fn({Box{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)}}, 3.0)};
}

std::vector<MeasurePtr> measures() {
    return {pareto_measure({5.0}), pareto_measure({4.0}), laplace_measure(1.0), extremal_measure({0.8, 1.0}),
            uniform_measure(-1.0, 2.0)};
}

}  // namespace

TEST_CASE("declared Lipschitz constants hold on random pairs") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z(0.0, 3.0);
    for (std::size_t n : {1u, 3u, 7u}) {
        for (const auto& f : functions(n)) {
            for (int k = 0; k < 500; ++k) {
                std::vector<double> x(n), y(n);
                for (auto& v : x) v = z(rng);
                for (auto& v : y) v = z(rng);
                const double d = dp_distance(x, y, f->metric());
                INFO(f->name());
                CHECK(std::abs(f->eval(x) - f->eval(y)) <= f->lipschitz_constant() * d + 1e-12);
            }
        }
    }
}

TEST_CASE("gradients agree with finite differences away from kinks") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.0, 3.0);
    const double h = 1e-6;
    for (const auto& f : functions(4)) {
        for (int k = 0; k < 100; ++k) {
            std::vector<double> x(4), g(4);
            for (auto& v : x) v = z(rng);
            f->grad(x, g);
            for (std::size_t i = 0; i < 4; ++i) {
                auto xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const double fd = (f->eval(xp) - f->eval(xm)) / (2 * h);
                // skip kinks, where the one-sided slopes differ
                const double left = (f->eval(x) - f->eval(xm)) / h, right = (f->eval(xp) - f->eval(x)) / h;
                if (std::abs(left - right) > 1e-4) continue;
                INFO(f->name());
                CHECK(g[i] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
            }
        }
    }
}

TEST_CASE("variance is non-negative and E|grad f|^2 lies in [0, 1]") {
    for (const auto& mu : measures()) {
        for (const auto& f : functions(3)) {
            EstimationPlan p;
            p.measure = mu;
            p.dimension = 3;
            p.function = f;
            p.samples = 2000;
            p.batches = 10;
            p.threads = 1;
            const auto r = run_pass(p, 2.0);
            CHECK(r.variance.variance >= 0.0);
            CHECK(r.variance.ci_low >= 0.0);
            if (f->metric() >= 2.0) {
                CHECK(r.gradient->norm.value >= 0.0);
                CHECK(r.gradient->norm.value <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("cdf and quantile are mutually inverse") {
    for (const auto& mu : measures()) {
        for (double p = 0.001; p < 1.0; p += 0.0137) {
            INFO(mu->name() << " p=" << p);
            CHECK(mu->cdf(mu->quantile_precise(p)) == doctest::Approx(p).epsilon(1e-9));
        }
        for (double s : {1e-3, 1e-6, 1e-10}) {
            CHECK(mu->survival(mu->upper_quantile(s)) == doctest::Approx(s).epsilon(1e-8));
        }
    }
}

TEST_CASE("half-line functional never exceeds the half-line scan value") {
    for (const auto& mu : measures()) {
        const auto est = half_line_scan(*mu, 0.8, 512);
        for (double p = 0.01; p < 1.0; p += 0.01) CHECK(half_line_functional(*mu, 0.8, p) <= est.value * (1 + 1e-9));
    }
}

TEST_CASE("Hoffman-Wielandt holds for random perturbations") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 2 + k % 7;
        SymMatrix a(n), b(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                a.at(i, j) = z(rng);
                b.at(i, j) = a(i, j) + 0.01 * z(rng);
            }
        CHECK(hoffman_wielandt_check(a, b).verdict == Verdict::pass);
    }
}
