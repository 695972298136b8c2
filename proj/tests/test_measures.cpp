#include <doctest.h>

#include <boost/math/distributions/laplace.hpp>
#include <boost/math/distributions/pareto.hpp>

#include <cmath>

#include "htc/errors.hpp"
#include "htc/measures.hpp"

using namespace htc;

TEST_CASE("Pareto law agrees with the Boost Pareto distribution") {
    // Density (lambda-1) x^(-lambda) on [1, inf) is Pareto(scale 1, shape lambda-1).
    for (double lambda : {3.5, 5.0, 10.0}) {
        const auto mu = pareto_measure({lambda});
        const boost::math::pareto_distribution<> ref(1.0, lambda - 1.0);
        for (double x : {1.0, 1.1, 2.0, 7.5, 100.0}) {
            CHECK(mu->cdf(x) == doctest::Approx(boost::math::cdf(ref, x)).epsilon(1e-14));
            CHECK(mu->density(x) == doctest::Approx(boost::math::pdf(ref, x)).epsilon(1e-14));
        }
        for (double p : {1e-9, 0.1, 0.5, 0.9, 1 - 1e-9}) {
            CHECK(mu->quantile(p) == doctest::Approx(boost::math::quantile(ref, p)).epsilon(1e-12));
        }
        const auto m = mu->analytic_moments();
        REQUIRE(m);
        CHECK(m->mean == doctest::Approx(boost::math::mean(ref)).epsilon(1e-14));
        CHECK(m->variance == doctest::Approx(boost::math::variance(ref)).epsilon(1e-14));
    }
}

TEST_CASE("Pareto lambda = 5 goldens") {
    const auto mu = pareto_measure({5.0});
    CHECK(mu->quantile(0.5) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK(mu->analytic_moments()->variance == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    // Upper-tail quantile keeps precision where 1 - s rounds.
    CHECK(mu->upper_quantile(1e-20) == doctest::Approx(1e5).epsilon(1e-12));
    CHECK(pareto_measure({3.0})->analytic_moments()->variance == kInf);
}

TEST_CASE("Laplace law agrees with the Boost Laplace distribution") {
    for (double t : {0.5, 1.0, 3.0}) {
        const auto mu = laplace_measure(t);
        const boost::math::laplace_distribution<> ref(0.0, 1.0 / t);
        for (double x : {-4.0, -0.3, 0.0, 0.2, 5.0}) {
            CHECK(mu->cdf(x) == doctest::Approx(boost::math::cdf(ref, x)).epsilon(1e-14));
            CHECK(mu->density(x) == doctest::Approx(boost::math::pdf(ref, x)).epsilon(1e-14));
        }
        for (double p : {0.01, 0.3, 0.5, 0.77}) {
            CHECK(mu->quantile(p) == doctest::Approx(boost::math::quantile(ref, p)).scale(1.0).epsilon(1e-13));
        }
        CHECK(mu->analytic_moments()->variance == doctest::Approx(2.0 / (t * t)));
    }
}

TEST_CASE("extremal law: median zero, closed-form tail, saturated quantile derivative") {
    const ExtremalParams params{0.8, 1.0};
    const auto mu = extremal_measure(params);
    const double a = params.a(), b = params.b();
    CHECK(b == doctest::Approx(5.0));
    CHECK(mu->quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    for (double t : {0.1, 1.0, 10.0}) {
        CHECK(mu->survival(t) == doctest::Approx(0.5 * std::pow(a * t + 1.0, 1.0 - b)).epsilon(1e-14));
    }
    // Q'(p) = (I / min{p, 1-p})^(1/alpha) by construction.
    for (double p : {0.1, 0.3, 0.7, 0.95}) {
        const double h = 1e-6;
        const double slope = (mu->quantile(p + h) - mu->quantile(p - h)) / (2 * h);
        CHECK(slope == doctest::Approx(std::pow(1.0 / std::min(p, 1 - p), 1.0 / 0.8)).epsilon(1e-6));
    }
    for (double p : {0.02, 0.4, 0.6, 0.98}) {
        CHECK(mu->cdf(mu->quantile(p)) == doctest::Approx(p).epsilon(1e-13));
    }
    CHECK(extremal_quantile(params, 0.25) == doctest::Approx(mu->quantile(0.25)));
}

TEST_CASE("density-built measure reproduces the Pareto closed form") {
    const auto built = measure_from_density([](double x) { return 4.0 * std::pow(x, -5.0); }, {1.0, kInf}, "pareto5");
    const auto exact = pareto_measure({5.0});
    for (double x : {1.0, 1.05, 1.5, 3.0, 20.0}) {
        CHECK(std::abs(built->cdf(x) - exact->cdf(x)) < 1e-10);
    }
    for (double p : {0.01, 0.5, 0.99, 0.9999}) {
        CHECK(built->quantile(p) == doctest::Approx(exact->quantile(p)).epsilon(1e-9));
    }
    CHECK(built->upper_quantile(1e-8) == doctest::Approx(exact->upper_quantile(1e-8)).epsilon(1e-8));
}

TEST_CASE("density-built measure rejects bad densities") {
    CHECK_THROWS_AS(measure_from_density([](double) { return 2.0; }, {0.0, 1.0}), NumericalError);
    CHECK_THROWS_AS(measure_from_density([](double x) { return x < 0.5 ? -1.0 : 3.0; }, {0.0, 1.0}), NumericalError);
}

TEST_CASE("constructor domains") {
    CHECK_THROWS_AS(pareto_measure({1.0}), DomainError);
    CHECK_THROWS_AS(laplace_measure(0.0), DomainError);
    CHECK_THROWS_AS(extremal_measure({1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(extremal_measure({0.8, -1.0}), DomainError);
    CHECK_THROWS_AS(uniform_measure(1.0, 1.0), DomainError);
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto mu = pareto_measure({5.0});
    const auto a = sample(*mu, 42, 1000), b = sample(*mu, 42, 1000), c = sample(*mu, 43, 1000);
    CHECK(a == b);
    CHECK(a != c);
    for (double x : a) CHECK(x >= 1.0);
}

TEST_CASE("uniform law") {
    const auto mu = uniform_measure(-1.0, 3.0);
    CHECK(mu->cdf(1.0) == doctest::Approx(0.5));
    CHECK(mu->quantile(0.25) == doctest::Approx(0.0));
    CHECK(mu->analytic_moments()->variance == doctest::Approx(16.0 / 12.0));
}
