#include <doctest.h>

#include <cmath>

#include "htc/constants.hpp"
#include "htc/errors.hpp"
#include "oracle.hpp"

using namespace htc;
using oracle::big;

TEST_CASE("C(lambda) at lambda = 5 matches the 50-digit oracle and equals 2^2.4") {
    const double got = pareto_C_lambda(5.0).value;
    const big want = oracle::C_lambda(big(5));
    CHECK(std::abs(got - oracle::d(want)) <= 1e-12);
    // The closed form collapses: 2^(14/4) 4^(-4/5) 2^(1/2) = 2^(12/5).
    CHECK(oracle::d(abs(want - pow(big(2), big("2.4")))) < 1e-40);
    CHECK(got == doctest::Approx(5.278031643091577).epsilon(1e-15));
}

TEST_CASE("C2(0.8, 1) is exactly 64") {
    const double got = C2_theorem_constant(0.8, 1.0).value;
    CHECK(std::abs(got - 64.0) <= 1e-12);
    CHECK(oracle::d(abs(oracle::C2(big("0.8"), big(1)) - 64)) < 1e-40);
}

TEST_CASE("C1, C3 at (0.8, 1) match the oracle") {
    const big a("0.8");
    CHECK(std::abs(C3_theorem_constant(0.8, 1.0).value - oracle::d(oracle::C3(a, big(1)))) <= 1e-12);
    CHECK(C3_theorem_constant(0.8, 1.0).value == doctest::Approx(4.298279727294167).epsilon(1e-14));
    CHECK(std::abs(C1_theorem_constant(0.8, 1.0, 1.0).value - oracle::d(oracle::C1(a, big(1), big(1)))) <= 1e-12);
}

TEST_CASE("theorem constants agree with the oracle over an admissible grid") {
    for (double a : {0.55, 0.7, 0.8, 0.9, 0.95}) {
        for (double I : {0.05, 0.3, 1.0, 2.5}) {
            CAPTURE(a);
            CAPTURE(I);
            CHECK(oracle::rel_err(C3_theorem_constant(a, I).value, oracle::C3(big(a), big(I))) < 1e-13);
            if (a > 2.0 / 3.0) CHECK(oracle::rel_err(C2_theorem_constant(a, I).value, oracle::C2(big(a), big(I))) < 1e-13);
            for (double b : {1.0, 1.5, 2.0}) {
                if (!(b < a / (1 - a))) continue;
                CHECK(oracle::rel_err(C1_theorem_constant(a, b, I).value, oracle::C1(big(a), big(b), big(I))) < 1e-13);
            }
        }
    }
}

TEST_CASE("lemma constants c1..c4 agree with the oracle") {
    for (double a : {0.6, 0.8, 0.9}) {
        for (double I : {0.2, 1.0}) {
            for (double b : {1.0, 2.0}) {
                if (!(b < a / (1 - a))) continue;
                for (double g : {1.0, 1.5, 2.0}) {
                    CAPTURE(a);
                    CAPTURE(b);
                    CAPTURE(g);
                    if (g <= b) {
                        CHECK(oracle::rel_err(c1_constant(a, b, g, I).value,
                                              oracle::c1(big(a), big(b), big(g), big(I))) < 1e-13);
                    }
                    if (g < a / (1 - a)) {
                        const auto lc = c2_c3_c4_constants(a, b, g, I);
                        CHECK(oracle::rel_err(lc.c2.value, oracle::c2(big(a), big(g), big(I))) < 1e-13);
                        CHECK(oracle::rel_err(lc.c3.value, oracle::c3(big(a), big(g), big(I))) < 1e-13);
                        CHECK(oracle::rel_err(lc.c4.value, oracle::c4(big(a), big(b), big(g), big(I))) < 1e-13);
                    }
                }
            }
        }
    }
}

TEST_CASE("Pareto Cheeger bound and the proof-instantiated constant") {
    CHECK(pareto_cheeger_bound(5.0).value == doctest::Approx(0.329876977693).epsilon(1e-11));
    CHECK(pareto_cheeger_bound(5.0).inputs.alpha == doctest::Approx(0.8));
    // C2(4/5, 4^(-5/4)) evaluated independently.
    const big want = oracle::C2(big(4) / 5, pow(big(4), big(-5) / 4));
    CHECK(oracle::rel_err(pareto_C_lambda_proof_variant(5.0).value, want) < 1e-13);
    CHECK(pareto_C_lambda_proof_variant(5.0).value == doctest::Approx(1.296839554651010).epsilon(1e-13));
}

TEST_CASE("extremal law parameters") {
    const auto ab = extremal_constants(0.8, 1.0);
    REQUIRE(ab.size() == 2);
    CHECK(ab[0].value == doctest::Approx(0.2102241038).epsilon(1e-9));
    CHECK(oracle::rel_err(ab[0].value, oracle::extremal_a(big("0.8"), big(1))) < 1e-14);
    CHECK(ab[1].value == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("domain violations name the hypothesis") {
    try {
        C2_theorem_constant(0.6, 1.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("2/3 < alpha < 1") != std::string::npos);
    }
    CHECK_THROWS_AS(pareto_C_lambda(3.0), DomainError);
    CHECK_THROWS_AS(C1_theorem_constant(0.8, 4.0, 1.0), DomainError);  // beta = alpha/(1-alpha)
    CHECK_THROWS_AS(C3_theorem_constant(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(C3_theorem_constant(0.8, 0.0), DomainError);
    CHECK_THROWS_AS(c1_constant(0.8, 1.0, 2.0, 1.0), DomainError);  // gamma > beta
    CHECK_THROWS_AS(c2_c3_c4_constants(0.8, 1.0, 4.0, 1.0), DomainError);
}

TEST_CASE("constants_table skips constants outside their domain") {
    ConstantRequest r;
    r.alpha = 0.6;
    r.cheeger = 1.0;
    std::vector<std::string> skipped;
    const auto table = constants_table(r, &skipped);
    bool has_c2 = false, has_c3 = false;
    for (const auto& c : table) {
        has_c2 |= c.name == "C2";
        has_c3 |= c.name == "C3";
    }
    CHECK_FALSE(has_c2);
    CHECK(has_c3);
    CHECK_FALSE(skipped.empty());

    ConstantRequest p;
    p.lambda = 5.0;
    const auto pt = constants_table(p);
    REQUIRE(pt.size() == 3);
    CHECK(pt[1].name == "C_lambda");
}
