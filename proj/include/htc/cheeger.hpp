#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "htc/measures.hpp"

namespace htc {

enum class CheegerMethod { analytic, half_line, grid_bruteforce };

std::string_view to_string(CheegerMethod m);

struct CheegerWitness {
    std::optional<double> threshold_p;              // half-line scans
    std::vector<std::pair<double, double>> intervals;  // extremizing set in x-space
    std::uint32_t mask = 0;                         // grid brute force: cell membership bits
    std::string description;
};

struct CheegerEstimate {
    double alpha = 1.0;
    double value = 0.0;
    CheegerMethod method = CheegerMethod::half_line;
    CheegerWitness witness;
    int grid_resolution = 0;
    /// True when the estimate only bounds the supremum from below.
    bool lower_bound = true;
};

/// min{p, 1-p} / density(Q(p))^alpha.
double half_line_functional(const Measure& measure, double alpha, double p);

/// Supremum of the half-line functional over p = (i + 1/2) / grid, refined by
/// Brent's method on the neighbouring cells of the best grid point; p = 1/2 is always tried.
CheegerEstimate half_line_scan(const Measure& measure, double alpha, int grid = 4096);

/// Exhaustive search over unions of `cells` equal-probability cells (cells <= 24).
/// Boundary measure is the sum of densities at interior membership changes.
CheegerEstimate grid_bruteforce(const Measure& measure, double alpha, int cells = 16);

/// Closed form when the measure knows one for this alpha.
std::optional<CheegerEstimate> analytic_cheeger(const Measure& measure, double alpha);

nlohmann::json to_json(const CheegerEstimate& e);

}  // namespace htc
