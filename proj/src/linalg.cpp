#include "htc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "htc/errors.hpp"

namespace htc {

SymMatrix::SymMatrix(std::size_t order) : n_(order), data_(packed_size(order), 0.0) {}

SymMatrix::SymMatrix(std::size_t order, std::vector<double> packed) : n_(order), data_(std::move(packed)) {
    if (data_.size() != packed_size(order)) {
        throw DomainError("packed symmetric matrix of order " + std::to_string(order) + " needs " +
                          std::to_string(packed_size(order)) + " entries, got " + std::to_string(data_.size()));
    }
}

SymMatrix SymMatrix::from_dense(std::size_t order, std::span<const double> row_major) {
    if (row_major.size() != order * order) throw DomainError("dense matrix size does not match order");
    SymMatrix m(order);
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = i; j < order; ++j) m.at(i, j) = row_major[i * order + j];
    }
    return m;
}

std::size_t SymMatrix::index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i - 1) / 2 + (j - i);
}

std::vector<double> SymMatrix::dense() const {
    std::vector<double> d(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) d[i * n_ + j] = (*this)(i, j);
    }
    return d;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
            const double v = (*this)(i, j);
            s += (i == j ? 1.0 : 2.0) * v * v;
        }
    }
    return std::sqrt(s);
}

namespace {

double off_norm(const std::vector<double>& a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
    }
    return std::sqrt(s);
}

constexpr std::size_t kMaxSweeps = 100;

}  // namespace

EigenResult jacobi_eigen(const SymMatrix& m) {
    const std::size_t n = m.order();
    if (n == 0) throw DomainError("eigenvalues of an empty matrix");
    for (double v : m.packed()) {
        if (!std::isfinite(v)) throw DomainError("matrix has non-finite entries");
    }
    std::vector<double> a = m.dense();
    const double target = 1e-12 * m.frobenius_norm();

    EigenResult res;
    double off = off_norm(a, n);
    res.off_norm_history.push_back(off);
    while (off > target) {
        if (res.sweeps == kMaxSweeps) throw NumericalError("Jacobi did not converge in 100 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                // Rutishauser's rotation: t = tan(theta) of the smaller root.
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
            }
        }
        ++res.sweeps;
        off = off_norm(a, n);
        res.off_norm_history.push_back(off);
    }
    res.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.values[i] = a[i * n + i];
    std::stable_sort(res.values.begin(), res.values.end(), std::greater<>());
    return res;
}

std::vector<double> eigenvalues(const SymMatrix& m) { return jacobi_eigen(m).values; }

BoundReport hoffman_wielandt_check(const SymMatrix& a, const SymMatrix& b) {
    if (a.order() != b.order()) {
        throw DomainError("Hoffman-Wielandt check needs matrices of the same order, got " +
                          std::to_string(a.order()) + " and " + std::to_string(b.order()));
    }
    const auto la = eigenvalues(a), lb = eigenvalues(b);
    double lhs = 0.0;
    for (std::size_t i = 0; i < la.size(); ++i) lhs += (la[i] - lb[i]) * (la[i] - lb[i]);
    double rhs = 0.0;
    const std::size_t n = a.order();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rhs += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
    }
    const double fa = a.frobenius_norm(), fb = b.frobenius_norm();
    const double tol = 1e-10 * std::max(1.0, fa * fa + fb * fb);
    return make_exact_report("hoffman_wielandt", lhs, rhs, {{"order", n}}, tol);
}

}  // namespace htc
