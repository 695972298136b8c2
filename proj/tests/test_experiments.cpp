#include <doctest.h>

#include <boost/math/distributions/pareto.hpp>

#include <cmath>

#include "htc/constants.hpp"
#include "htc/errors.hpp"
#include "htc/experiments.hpp"
#include "htc/rng.hpp"

using namespace htc;

namespace {

const double kI = std::pow(4.0, -0.8);

SamplingConfig sampling(std::uint64_t samples, std::uint64_t seed = 1) {
    SamplingConfig s;
    s.samples = samples;
    s.seed = seed;
    s.batches = 20;
    s.threads = 1;
    return s;
}

bool all_pass(const ExperimentOutput& out) {
    for (const auto& r : out.reports) {
        INFO(r.theorem_id << " lhs=" << r.lhs << " rhs=" << r.rhs);
        CHECK(r.verdict == Verdict::pass);
    }
    return out.verdict() == Verdict::pass;
}

}  // namespace

TEST_CASE("Pareto variance theorem at moderate sizes") {
    ParetoTheoremConfig c;
    c.dims = {4, 16, 64};
    c.sampling = sampling(40000);
    const auto out = verify_pareto_theorem(c);
    CHECK(all_pass(out));
    REQUIRE(out.reports.size() == 4);
    CHECK(out.reports[0].theorem_id == "pareto_theorem/n=4");
    CHECK(out.reports.back().theorem_id == "pareto_theorem/slope");
    CHECK(out.data["pareto_theorem"].size() == 3);
    c.lambda = 3.0;
    CHECK_THROWS_AS(verify_pareto_theorem(c), DomainError);
}

TEST_CASE("one-dimensional Pareto variance against C(lambda)") {
    const auto out = pareto_one_dimensional_checks({4.0, 5.0, 10.0});
    CHECK(all_pass(out));
    boost::math::pareto_distribution<> d(1.0, 4.0);  // shape lambda - 1
    CHECK(out.reports[1].lhs == doctest::Approx(boost::math::variance(d)).epsilon(1e-12));
    CHECK(out.reports[1].rhs == doctest::Approx(5.278031643091577).epsilon(1e-12));
}

TEST_CASE("certificates") {
    const auto l2 = l2_certificate(0.8, kI);
    CHECK(l2.alpha == doctest::Approx(0.5));
    CHECK(l2.value == doctest::Approx(C2_theorem_constant(0.8, kI).value));
    const auto l1 = l1_certificate(0.8, kI);
    CHECK(l1.alpha == doctest::Approx(0.4));
}

TEST_CASE("product theorem and d_p theorem pass for Pareto") {
    ProductTheoremConfig pc;
    pc.measure = pareto_measure({5.0});
    pc.certificate = l2_certificate(0.8, kI);
    pc.n = 16;
    pc.sampling = sampling(20000);
    CHECK(all_pass(verify_product_theorem(pc)));

    DpTheoremConfig dc;
    dc.measure = pareto_measure({5.0});
    dc.certificate = l1_certificate(0.8, kI);
    dc.p = 1.5;
    dc.n = 16;
    dc.sampling = sampling(20000);
    const auto out = verify_dp_theorem(dc);
    CHECK(all_pass(out));
    CHECK(out.reports[0].theorem_id == "dp_theorem/C1/p=1.5/n=16");

    dc.p = 2.0;
    dc.function = "scaled_sum:p=1.5";
    CHECK_THROWS_WITH_AS(verify_dp_theorem(dc), doctest::Contains("metric mismatch"), DomainError);
    dc.kind = CertificateKind::c2;
    dc.p = kInf;
    dc.function = "max";
    CHECK_THROWS_AS(verify_dp_theorem(dc), DomainError);
    dc.certificate.reset();
    dc.p = 1.5;
    CHECK_THROWS_AS(verify_dp_theorem(dc), DomainError);
}

TEST_CASE("tail bound closed forms") {
    CHECK(tail_bound(1.0, 0.5, 1.0) == doctest::Approx(0.5 * std::exp(-2.0)));
    const ExtremalParams ep{0.8, kI};
    const double a = ep.a(), b = ep.b();
    CHECK(a == doctest::Approx(std::pow(2.0, -0.25)));
    CHECK(tail_bound(0.8, kI, 1.0) == doctest::Approx(0.5 * std::pow(a + 1.0, 1.0 - b)));
    // Pareto(5) centred at its median has exactly this tail
    const double m = std::pow(2.0, 0.25);
    for (double t : {0.5, 1.0, 3.0}) CHECK(tail_bound(0.8, kI, t) == doctest::Approx(std::pow(m + t, -4.0)));
    CHECK_THROWS_AS(tail_bound(0.8, 0.0, 1.0), DomainError);
}

TEST_CASE("tail verifier passes for Pareto and Laplace, fails for a wrong Cheeger value") {
    TailBoundConfig c;
    c.measure = pareto_measure({5.0});
    c.sampling = sampling(100000);
    const auto out = verify_tail_bounds(c);
    CHECK(all_pass(out));
    for (const auto& r : out.reports) CHECK(r.comparison == Comparison::equality);

    TailBoundConfig l;
    l.measure = laplace_measure(1.0);
    l.alpha = 1.0;
    l.thresholds = {0.0, 1.0, 2.0, 3.0};
    l.sampling = sampling(100000);
    CHECK(all_pass(verify_tail_bounds(l)));
    l.cheeger = 0.1;
    CHECK(verify_tail_bounds(l).verdict() == Verdict::fail);
}

TEST_CASE("isoperimetric check with exact box masses") {
    const auto mu = pareto_measure({5.0});
    const Box a{{1.0, 1.0}, {1.5, 1.5}};
    const Box b{{4.0, 4.0}, {kInf, kInf}};
    CHECK(box_measure(*mu, b) == doctest::Approx(std::pow(4.0, -8.0)));
    CHECK(box_measure(*mu, a) == doctest::Approx(std::pow(1.0 - std::pow(1.5, -4.0), 2.0)));
    IsoperimetricConfig c{mu, l2_certificate(0.8, kI), a, b};
    const auto out = verify_isoperimetric(c);
    CHECK(all_pass(out));
    CHECK(out.reports[0].lhs == doctest::Approx(box_gap(a, b)));
}

TEST_CASE("known Poincare constants") {
    CHECK(*known_poincare_constant(*laplace_measure(2.0)) == doctest::Approx(1.0));
    CHECK(*known_poincare_constant(*uniform_measure(0.0, 2.0)) == doctest::Approx(4.0 / (M_PI * M_PI)));
    CHECK_FALSE(known_poincare_constant(*pareto_measure({5.0})).has_value());
}

TEST_CASE("sharp d_p bound on Laplace") {
    SharpPoincareConfig c;
    c.measure = laplace_measure(1.0);
    c.sampling = sampling(100000);
    CHECK(all_pass(verify_sharp_poincare_dp(c)));
}

TEST_CASE("random matrix variance matches a closed-form 2x2 oracle on the same draws") {
    RandomMatrixConfig c;
    c.n = 2;
    c.trials = 200;
    c.seed = 9;
    c.batches = 20;
    c.threads = 1;
    const auto out = verify_random_matrix(c);
    REQUIRE(out.reports.size() == 2);
    CHECK(out.reports[0].theorem_id == "random_matrix/n=2/i=1");

    const auto mu = pareto_measure({5.0});
    const CounterStream s(9);
    std::vector<double> v;
    for (std::uint64_t i = 0; i < c.trials; ++i) {
        const double a = mu->quantile_precise(s.uniform(i * 3 + 0));
        const double b = mu->quantile_precise(s.uniform(i * 3 + 1));
        const double d = mu->quantile_precise(s.uniform(i * 3 + 2));
        v.push_back(0.5 * (a + d) + std::hypot(0.5 * (a - d), b));
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    CHECK(out.reports[0].lhs == doctest::Approx(ss / double(v.size() - 1)).epsilon(1e-10));
    CHECK(out.reports[0].rhs == doctest::Approx(2.0 * 5.278031643091577 * 1.0));
    CHECK(out.reports[1].rhs == doctest::Approx(2.0 * 5.278031643091577 * std::pow(3.0, 0.5)));

    c.n = 1;
    CHECK_THROWS_AS(verify_random_matrix(c), DomainError);
    c.n = 2;
    c.trials = 50;
    CHECK_THROWS_AS(verify_random_matrix(c), DomainError);
    c.trials = 200;
    c.eigen_index = 3;
    CHECK_THROWS_AS(verify_random_matrix(c), DomainError);
    c.eigen_index = 1;
    c.lambda = 3.0;
    CHECK_THROWS_AS(verify_random_matrix(c), DomainError);
}

TEST_CASE("Hoffman-Wielandt battery") {
    const auto out = hoffman_wielandt_battery(8, 100, 4);
    CHECK(all_pass(out));
    CHECK(out.reports[0].lhs <= 1.0);
}

TEST_CASE("ramp moments at m = 2 for alpha = 0.8") {
    // E f = m^-3/3, E f^2 = m^-2/3, P(X > m) = m^-4
    const auto r = ramp_moments(0.8, 2.0);
    CHECK(r.mean == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    CHECK(r.second == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(r.variance == doctest::Approx(47.0 / 576.0).epsilon(1e-12));
    CHECK(r.grad_second == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(r.grad_first == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(r.median == 0.0);
    CHECK(r.abs_dev == doctest::Approx(r.mean));
    const auto low = ramp_moments(0.8, 1.0);
    CHECK(low.median == doctest::Approx(std::pow(2.0, 0.25) - 1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ramp_moments(0.5, 2.0), DomainError);
    CHECK_THROWS_AS(ramp_moments(0.8, 0.5), DomainError);
}

TEST_CASE("tightness report") {
    const auto out = tightness_report({});
    CHECK(all_pass(out));
    TightnessConfig bad;
    bad.alpha1 = 0.4;
    CHECK_THROWS_AS(tightness_report(bad), DomainError);
    bad = {};
    bad.ms = {2.0, 4.0};
    CHECK_THROWS_AS(tightness_report(bad), DomainError);
}

TEST_CASE("suite runner isolates errors and keeps job order") {
    std::vector<SuiteJob> jobs{
        {"ok", [](std::uint64_t, unsigned) { return pareto_one_dimensional_checks({5.0}); }},
        {"boom", [](std::uint64_t, unsigned) -> ExperimentOutput { throw DomainError("bad"); }},
    };
    const auto res = run_suite(jobs, 7, 2);
    REQUIRE(res.size() == 2);
    CHECK(res[0].name == "ok");
    CHECK(res[0].seed == derive_seed(7, "ok"));
    CHECK(res[0].output.verdict() == Verdict::pass);
    CHECK(res[1].output.verdict() == Verdict::fail);
    CHECK(res[1].output.reports[0].theorem_id == "boom/error");
    CHECK(acceptance_jobs().size() == 12);
}
