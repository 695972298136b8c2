#include "htc/cheeger.hpp"

#include <boost/math/tools/minima.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <sstream>

#include "htc/errors.hpp"

namespace htc {

std::string_view to_string(CheegerMethod m) {
    switch (m) {
        case CheegerMethod::analytic: return "analytic";
        case CheegerMethod::half_line: return "half_line";
        case CheegerMethod::grid_bruteforce: return "grid_bruteforce";
    }
    return "unknown";
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Cheeger estimation requires 0 < alpha <= 1");
}

std::string half_line_text(const Measure& m, double p) {
    std::ostringstream os;
    os.precision(10);
    const double x = m.quantile_precise(p);
    if (p >= 0.5) {
        os << "upper half-line [" << x << ", inf) at p = " << p;
    } else {
        os << "lower half-line (-inf, " << x << "] at p = " << p;
    }
    return os.str();
}

std::vector<std::pair<double, double>> half_line_interval(const Measure& m, double p) {
    const double x = m.quantile_precise(p);
    if (p >= 0.5) return {{x, m.support().hi}};
    return {{m.support().lo, x}};
}

}  // namespace

double half_line_functional(const Measure& measure, double alpha, double p) {
    const double mass = std::min(p, 1.0 - p);
    const double d = measure.density(measure.quantile_precise(p));
    if (d <= 0.0) return mass > 0.0 ? kInf : 0.0;
    return mass / std::pow(d, alpha);
}

CheegerEstimate half_line_scan(const Measure& measure, double alpha, int grid) {
    check_alpha(alpha);
    if (grid < 10) throw DomainError("half_line_scan: grid must be at least 10");

    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i < grid; ++i) {
        const double p = (i + 0.5) / grid;
        const double v = half_line_functional(measure, alpha, p);
        if (v == kInf) {
            CheegerEstimate e{alpha, kInf, CheegerMethod::half_line, {}, grid, true};
            e.witness.threshold_p = p;
            e.witness.intervals = half_line_interval(measure, p);
            e.witness.description = "density vanishes at the quantile, " + half_line_text(measure, p);
            return e;
        }
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }

    double best_p = (best + 0.5) / grid;
    const double lo = std::max(best - 0.5, 0.0) / grid;
    const double hi = std::min(best + 1.5, static_cast<double>(grid)) / grid;
    auto neg = [&](double p) {
        if (p <= 0.0 || p >= 1.0) return 0.0;
        return -half_line_functional(measure, alpha, p);
    };
    std::uintmax_t iters = 200;
    const auto [p_ref, neg_ref] = boost::math::tools::brent_find_minima(neg, lo, hi, 52, iters);
    if (-neg_ref > best_value) {
        best_value = -neg_ref;
        best_p = p_ref;
    }
    // min{p, 1-p} has its kink at 1/2, where Brent converges slowly.
    if (const double mid = half_line_functional(measure, alpha, 0.5); mid > best_value) {
        best_value = mid;
        best_p = 0.5;
    }

    CheegerEstimate e;
    e.alpha = alpha;
    e.value = best_value;
    e.method = CheegerMethod::half_line;
    e.grid_resolution = grid;
    e.lower_bound = !measure.tail_monotone();
    e.witness.threshold_p = best_p;
    e.witness.intervals = half_line_interval(measure, best_p);
    e.witness.description = half_line_text(measure, best_p);
    return e;
}

CheegerEstimate grid_bruteforce(const Measure& measure, double alpha, int cells) {
    check_alpha(alpha);
    if (cells < 2 || cells > 24) throw DomainError("grid_bruteforce: cells must lie in [2, 24]");

    // Boundary j (1 <= j < cells) separates cell j-1 from cell j.
    std::vector<double> boundary_x(cells + 1);
    std::vector<double> boundary_density(cells + 1, 0.0);
    boundary_x[0] = measure.support().lo;
    boundary_x[cells] = measure.support().hi;
    for (int j = 1; j < cells; ++j) {
        boundary_x[j] = measure.quantile_precise(static_cast<double>(j) / cells);
        boundary_density[j] = measure.density(boundary_x[j]);
    }

    // Membership changes of mask are the bits of (mask ^ (mask >> 1)) below cells-1;
    // bit j-1 of that word flags boundary j. Sum densities by byte-wise tables.
    const int transitions = cells - 1;
    std::array<std::array<double, 256>, 3> table{};
    for (int chunk = 0; chunk < 3; ++chunk) {
        for (int byte = 0; byte < 256; ++byte) {
            double sum = 0.0;
            for (int b = 0; b < 8; ++b) {
                const int j = chunk * 8 + b + 1;
                if ((byte >> b & 1) && j <= transitions) sum += boundary_density[j];
            }
            table[chunk][byte] = sum;
        }
    }
    const std::uint32_t transition_mask = (1u << transitions) - 1u;

    const std::uint32_t full = (1u << cells) - 1u;
    double best = -1.0;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        const std::uint32_t t = (mask ^ (mask >> 1)) & transition_mask;
        const double boundary = table[0][t & 0xFF] + table[1][(t >> 8) & 0xFF] + table[2][(t >> 16) & 0xFF];
        const int k = std::popcount(mask);
        const double mass = static_cast<double>(std::min(k, cells - k)) / cells;
        const double value = boundary > 0.0 ? mass / std::pow(boundary, alpha) : kInf;
        if (value > best) {
            best = value;
            best_mask = mask;
        }
    }

    CheegerEstimate e;
    e.alpha = alpha;
    e.value = best;
    e.method = CheegerMethod::grid_bruteforce;
    e.grid_resolution = cells;
    e.lower_bound = true;
    e.witness.mask = best_mask;
    std::ostringstream os;
    os.precision(10);
    os << "union of cells";
    for (int c = 0; c < cells;) {
        if (!(best_mask >> c & 1)) {
            ++c;
            continue;
        }
        int end = c;
        while (end < cells && (best_mask >> end & 1)) ++end;
        e.witness.intervals.emplace_back(boundary_x[c], boundary_x[end]);
        os << " [" << c << "," << end << ")";
        c = end;
    }
    e.witness.description = os.str();
    return e;
}

std::optional<CheegerEstimate> analytic_cheeger(const Measure& measure, double alpha) {
    check_alpha(alpha);
    const auto v = measure.analytic_cheeger(alpha);
    if (!v) return std::nullopt;
    CheegerEstimate e;
    e.alpha = alpha;
    e.value = *v;
    e.method = CheegerMethod::analytic;
    e.lower_bound = false;
    e.witness.description = "closed form for " + measure.name();
    return e;
}

nlohmann::json to_json(const CheegerEstimate& e) {
    nlohmann::json intervals = nlohmann::json::array();
    auto end = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return v > 0 ? "inf" : "-inf";
    };
    for (const auto& [a, b] : e.witness.intervals) intervals.push_back({end(a), end(b)});
    nlohmann::json w{{"description", e.witness.description}, {"intervals", intervals}};
    if (e.witness.threshold_p) w["threshold_p"] = *e.witness.threshold_p;
    if (e.method == CheegerMethod::grid_bruteforce) w["mask"] = e.witness.mask;
    return {{"alpha", e.alpha},
            {"value", end(e.value)},
            {"method", std::string(to_string(e.method))},
            {"witness", w},
            {"grid_resolution", e.grid_resolution},
            {"lower_bound", e.lower_bound}};
}

}  // namespace htc
