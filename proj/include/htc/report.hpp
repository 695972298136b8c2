#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace htc {

enum class Verdict { pass, fail, inconclusive };

/// How a report's lhs relates to its rhs.
///   upper_bound: the claim is lhs <= rhs; pass iff lhs_ci_high <= rhs + tolerance,
///                fail iff lhs_ci_low > rhs + tolerance, inconclusive otherwise.
///   equality:    the claim is lhs == rhs (an attained bound); pass iff rhs lies in
///                [lhs_ci_low - tolerance, lhs_ci_high + tolerance].
enum class Comparison { upper_bound, equality };

std::string_view to_string(Verdict v);
std::string_view to_string(Comparison c);

/// One verification record. Deterministic checks carry a degenerate interval
/// (lhs_ci_low == lhs == lhs_ci_high) and a numerical tolerance.
struct BoundReport {
    std::string theorem_id;
    double lhs = 0.0;
    double lhs_ci_low = 0.0;
    double lhs_ci_high = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    double slack = 0.0;  // rhs - lhs_ci_high
    Comparison comparison = Comparison::upper_bound;
    Verdict verdict = Verdict::inconclusive;
    nlohmann::json config = nlohmann::json::object();
};

/// Builds a report and fills in slack and verdict.
BoundReport make_report(std::string theorem_id, double lhs, double ci_low, double ci_high, double rhs,
                        nlohmann::json config = nlohmann::json::object(),
                        Comparison comparison = Comparison::upper_bound, double tolerance = 0.0);

/// Deterministic variant with a point lhs.
BoundReport make_exact_report(std::string theorem_id, double lhs, double rhs,
                              nlohmann::json config = nlohmann::json::object(), double tolerance = 0.0,
                              Comparison comparison = Comparison::upper_bound);

Verdict decide(Comparison comparison, double ci_low, double ci_high, double rhs, double tolerance);

/// Worst verdict across a set: any fail -> fail, else any inconclusive -> inconclusive, else pass.
Verdict combine(std::span<const BoundReport> reports);

nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(std::span<const BoundReport> reports);

/// Stable CSV header shared by every report writer. The config column holds compact JSON,
/// quoted with doubled inner quotes.
inline constexpr std::string_view kReportCsvHeader =
    "theorem_id,lhs,lhs_ci_low,lhs_ci_high,rhs,tolerance,slack,comparison,verdict,config";

void write_csv(std::ostream& os, std::span<const BoundReport> reports, bool header = true);

/// Shortest round-trip decimal form, used by every text writer so output is byte-stable.
std::string format_double(double x);

}  // namespace htc
