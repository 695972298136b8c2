#include "htc/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace htc {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::string_view to_string(Comparison c) {
    return c == Comparison::equality ? "equality" : "upper_bound";
}

Verdict decide(Comparison comparison, double ci_low, double ci_high, double rhs, double tolerance) {
    if (std::isnan(ci_low) || std::isnan(ci_high) || std::isnan(rhs)) return Verdict::inconclusive;
    if (comparison == Comparison::equality) {
        return (ci_low - tolerance <= rhs && rhs <= ci_high + tolerance) ? Verdict::pass : Verdict::fail;
    }
    if (ci_high <= rhs + tolerance) return Verdict::pass;
    if (ci_low > rhs + tolerance) return Verdict::fail;
    return Verdict::inconclusive;
}

BoundReport make_report(std::string theorem_id, double lhs, double ci_low, double ci_high, double rhs,
                        nlohmann::json config, Comparison comparison, double tolerance) {
    BoundReport r;
    r.theorem_id = std::move(theorem_id);
    r.lhs = lhs;
    r.lhs_ci_low = ci_low;
    r.lhs_ci_high = ci_high;
    r.rhs = rhs;
    r.tolerance = tolerance;
    r.slack = rhs - ci_high;
    r.comparison = comparison;
    r.verdict = decide(comparison, ci_low, ci_high, rhs, tolerance);
    r.config = std::move(config);
    return r;
}

BoundReport make_exact_report(std::string theorem_id, double lhs, double rhs, nlohmann::json config,
                              double tolerance, Comparison comparison) {
    return make_report(std::move(theorem_id), lhs, lhs, lhs, rhs, std::move(config), comparison, tolerance);
}

Verdict combine(std::span<const BoundReport> reports) {
    bool inconclusive = false;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::fail) return Verdict::fail;
        if (r.verdict == Verdict::inconclusive) inconclusive = true;
    }
    return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

namespace {
nlohmann::json number_or_string(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}
}  // namespace

nlohmann::json to_json(const BoundReport& r) {
    return nlohmann::json{
        {"theorem_id", r.theorem_id},
        {"lhs", number_or_string(r.lhs)},
        {"lhs_ci_low", number_or_string(r.lhs_ci_low)},
        {"lhs_ci_high", number_or_string(r.lhs_ci_high)},
        {"rhs", number_or_string(r.rhs)},
        {"tolerance", number_or_string(r.tolerance)},
        {"slack", number_or_string(r.slack)},
        {"comparison", std::string(to_string(r.comparison))},
        {"verdict", std::string(to_string(r.verdict))},
        {"config", r.config},
    };
}

nlohmann::json to_json(std::span<const BoundReport> reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {
std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}
}  // namespace

void write_csv(std::ostream& os, std::span<const BoundReport> reports, bool header) {
    if (header) os << kReportCsvHeader << '\n';
    for (const auto& r : reports) {
        os << r.theorem_id << ',' << format_double(r.lhs) << ',' << format_double(r.lhs_ci_low) << ','
           << format_double(r.lhs_ci_high) << ',' << format_double(r.rhs) << ',' << format_double(r.tolerance)
           << ',' << format_double(r.slack) << ',' << to_string(r.comparison) << ',' << to_string(r.verdict)
           << ',' << csv_quote(r.config.dump()) << '\n';
    }
}

}  // namespace htc
