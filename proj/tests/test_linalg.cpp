#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "htc/errors.hpp"
#include "htc/linalg.hpp"

using namespace htc;

namespace {

SymMatrix random_sym(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.at(i, j) = z(rng);
    return m;
}

std::vector<double> eigen_reference(const SymMatrix& m) {
    const std::size_t n = m.order();
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(v.rbegin(), v.rend());
    return v;
}

}  // namespace

TEST_CASE("packed storage") {
    SymMatrix m(3, {1, 2, 3, 4, 5, 6});
    CHECK(m(0, 2) == 3);
    CHECK(m(2, 0) == 3);
    CHECK(m(1, 1) == 4);
    CHECK(m(2, 2) == 6);
    CHECK(m.trace() == 11);
    CHECK(m.dense() == std::vector<double>{1, 2, 3, 2, 4, 5, 3, 5, 6});
    CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(1 + 16 + 36 + 2 * (4 + 9 + 25.0))));
    CHECK(SymMatrix::packed_size(50) == 1275);
    CHECK_THROWS_AS(SymMatrix(3, {1, 2}), DomainError);
    CHECK_THROWS_AS(SymMatrix::from_dense(2, std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("diagonal and 2x2 spectra") {
    CHECK(eigenvalues(SymMatrix(3, {3, 0, 0, 1, 0, 2})) == std::vector<double>{3, 2, 1});
    const auto v = eigenvalues(SymMatrix::from_dense(2, std::vector<double>{2, 1, 1, 2}));
    CHECK(v[0] == doctest::Approx(3.0));
    CHECK(v[1] == doctest::Approx(1.0));
}

TEST_CASE("invariants and Eigen cross-check") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 5u, 12u, 30u}) {
        const auto m = random_sym(n, rng);
        const auto r = jacobi_eigen(m);
        const auto ref = eigen_reference(m);
        double sum = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(r.values[i] == doctest::Approx(ref[i]).epsilon(1e-10).scale(m.frobenius_norm()));
            if (i > 0) CHECK(r.values[i - 1] >= r.values[i]);
            sum += r.values[i];
            sq += r.values[i] * r.values[i];
        }
        CHECK(std::abs(sum - m.trace()) <= 1e-10 * std::max(1.0, m.frobenius_norm()));
        CHECK(std::abs(std::sqrt(sq) - m.frobenius_norm()) <= 1e-10 * std::max(1.0, m.frobenius_norm()));
        for (std::size_t k = 1; k < r.off_norm_history.size(); ++k) {
            CHECK(r.off_norm_history[k] <= r.off_norm_history[k - 1] + 1e-12);
        }
        CHECK(r.off_norm_history.back() <= 1e-12 * std::max(1e-300, m.frobenius_norm()));
    }
}

TEST_CASE("bad input") {
    CHECK_THROWS_AS(eigenvalues(SymMatrix(0)), DomainError);
    CHECK_THROWS_AS(eigenvalues(SymMatrix(2, {1, NAN, 1})), DomainError);
    CHECK_THROWS_AS(hoffman_wielandt_check(SymMatrix(2), SymMatrix(3)), DomainError);
}

TEST_CASE("Hoffman-Wielandt") {
    // commuting diagonal matrices attain equality
    const auto eq = hoffman_wielandt_check(SymMatrix(2, {1, 0, 3}), SymMatrix(2, {2, 0, 5}));
    CHECK(eq.lhs == doctest::Approx(5.0));
    CHECK(eq.rhs == doctest::Approx(5.0));
    CHECK(eq.verdict == Verdict::pass);
    const auto rot = hoffman_wielandt_check(SymMatrix(2, {1, 0, 0}), SymMatrix(2, {0, 0, 1}));
    CHECK(rot.lhs == doctest::Approx(0.0).scale(1.0));
    CHECK(rot.rhs == doctest::Approx(2.0));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const auto r = hoffman_wielandt_check(random_sym(6, rng), random_sym(6, rng));
        CHECK(r.verdict == Verdict::pass);
    }
}
