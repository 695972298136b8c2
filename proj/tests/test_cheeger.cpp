#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "htc/cheeger.hpp"
#include "htc/errors.hpp"
#include "htc/measures.hpp"

using namespace htc;

namespace {

// Independent enumeration: sets are unions of the cells [Q(k/c), Q((k+1)/c)); the
// boundary mass of a set is the sum of densities at cell edges where membership flips.
double brute(const Measure& mu, double alpha, int cells) {
    std::vector<double> edge_density(cells + 1, 0.0);
    for (int k = 1; k < cells; ++k) edge_density[k] = mu.density(mu.quantile(double(k) / cells));
    double best = 0.0;
    for (unsigned mask = 1; mask + 1 < (1u << cells); ++mask) {
        int count = 0;
        double boundary = 0.0;
        for (int k = 0; k < cells; ++k) {
            const bool in = mask >> k & 1u;
            count += in;
            if (k > 0 && in != bool(mask >> (k - 1) & 1u)) boundary += edge_density[k];
        }
        const double m = double(count) / cells;
        best = std::max(best, std::min(m, 1.0 - m) / std::pow(boundary, alpha));
    }
    return best;
}

}  // namespace

TEST_CASE("half-line scan reproduces the Pareto Cheeger bound") {
    // On the upper half-line the functional is s / (4 s^(5/4))^(4/5) = 4^(-4/5) for every s <= 1/2.
    const auto mu = pareto_measure({5.0});
    const auto est = half_line_scan(*mu, 0.8);
    CHECK(std::abs(est.value - std::pow(4.0, -0.8)) < 1e-6);
    CHECK(est.value == doctest::Approx(0.329876977693).epsilon(1e-9));
    CHECK_FALSE(est.lower_bound);  // Pareto tails are monotone, so half-lines suffice
    CHECK(est.witness.threshold_p.has_value());
}

TEST_CASE("grid brute force on 16 cells is within 5% of the half-line value") {
    const auto mu = pareto_measure({5.0});
    const auto grid = grid_bruteforce(*mu, 0.8, 16);
    CHECK(std::abs(grid.value / std::pow(4.0, -0.8) - 1.0) < 0.05);
    CHECK(grid.witness.mask != 0);
    CHECK(grid.value == doctest::Approx(brute(*mu, 0.8, 16)).epsilon(1e-12));
}

TEST_CASE("grid brute force matches an independent enumeration") {
    for (int cells : {4, 7, 10}) {
        const auto lap = laplace_measure(1.0);
        CHECK(grid_bruteforce(*lap, 1.0, cells).value == doctest::Approx(brute(*lap, 1.0, cells)).epsilon(1e-12));
        const auto ext = extremal_measure({0.75, 0.5});
        CHECK(grid_bruteforce(*ext, 0.75, cells).value == doctest::Approx(brute(*ext, 0.75, cells)).epsilon(1e-12));
    }
}

TEST_CASE("Laplace classical Cheeger value is 1/t in the sup convention") {
    for (double t : {0.5, 1.0, 2.0}) {
        const auto mu = laplace_measure(t);
        CHECK(half_line_scan(*mu, 1.0).value == doctest::Approx(1.0 / t).epsilon(1e-9));
        const auto exact = analytic_cheeger(*mu, 1.0);
        REQUIRE(exact);
        CHECK(exact->value == doctest::Approx(1.0 / t));
    }
    CHECK_FALSE(analytic_cheeger(*laplace_measure(1.0), 0.8).has_value());
}

TEST_CASE("extremal law attains its own Cheeger value along half-lines") {
    const auto mu = extremal_measure({0.8, 0.7});
    CHECK(half_line_scan(*mu, 0.8).value == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("uniform law scales with the interval length") {
    for (double L : {1.0, 2.0, 5.0}) {
        const auto mu = uniform_measure(0.0, L);
        CHECK(half_line_scan(*mu, 0.7).value == doctest::Approx(0.5 * std::pow(L, 0.7)).epsilon(1e-9));
    }
}

TEST_CASE("argument validation") {
    const auto mu = pareto_measure({5.0});
    CHECK_THROWS_AS(grid_bruteforce(*mu, 0.8, 1), DomainError);
    CHECK_THROWS_AS(grid_bruteforce(*mu, 0.8, 25), DomainError);
    CHECK_THROWS_AS(half_line_scan(*mu, 0.0), DomainError);
    CHECK_THROWS_AS(half_line_scan(*mu, 0.8, 0), DomainError);
}

TEST_CASE("JSON form carries the witness") {
    const auto j = to_json(half_line_scan(*pareto_measure({5.0}), 0.8, 256));
    CHECK(j.at("method") == "half_line");
    CHECK(j.contains("witness"));
}
