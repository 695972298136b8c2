#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "htc/report.hpp"

namespace htc {

/// Symmetric matrix stored as its packed upper triangle, row-major:
/// (0,0) (0,1) ... (0,n-1) (1,1) ... (n-1,n-1).
class SymMatrix {
public:
    explicit SymMatrix(std::size_t order = 0);
    SymMatrix(std::size_t order, std::vector<double> packed);

    static SymMatrix from_dense(std::size_t order, std::span<const double> row_major);
    static std::size_t packed_size(std::size_t order) { return order * (order + 1) / 2; }

    std::size_t order() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
    double& at(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    const std::vector<double>& packed() const { return data_; }

    std::vector<double> dense() const;
    double trace() const;
    double frobenius_norm() const;

private:
    std::size_t index(std::size_t i, std::size_t j) const;

    std::size_t n_;
    std::vector<double> data_;
};

struct EigenResult {
    std::vector<double> values;  // descending
    std::size_t sweeps = 0;
    std::vector<double> off_norm_history;  // off-diagonal Frobenius norm, initial then after each sweep
};

/// Cyclic Jacobi until the off-diagonal Frobenius norm is at most 1e-12 * |A|_F.
EigenResult jacobi_eigen(const SymMatrix& m);

/// Eigenvalues in descending order; ties keep their diagonal order.
std::vector<double> eigenvalues(const SymMatrix& m);

/// sum_i (l_i - l'_i)^2 <= sum_ij (A_ij - B_ij)^2 over sorted spectra.
BoundReport hoffman_wielandt_check(const SymMatrix& a, const SymMatrix& b);

}  // namespace htc
