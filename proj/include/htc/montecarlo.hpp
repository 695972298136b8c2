#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "htc/lipschitz.hpp"
#include "htc/measures.hpp"

namespace htc {

struct EstimationPlan {
    MeasurePtr measure;
    std::size_t dimension = 1;
    LipschitzFnPtr function;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::uint32_t batches = 32;
    unsigned threads = 0;  // 0 = hardware concurrency; never affects results

    void validate() const;
    nlohmann::json describe() const;
};

/// Point estimate with a 95% batch-means interval.
struct Interval95 {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct VarianceEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double batch_median_variance = 0.0;  // robustness cross-check
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::uint32_t batches = 0;
};

struct GradientMoment {
    double q = 2.0;
    Interval95 norm;                      // E|grad f|_2^q
    Interval95 coordinate_sum;            // sum_i E|d_i f|^q
    std::vector<double> per_coordinate;   // E|d_i f|^q, filled when requested
};

struct PassResult {
    VarianceEstimate variance;
    std::optional<GradientMoment> gradient;
};

/// One deterministic sampling pass. Draw j of sample i is quantile(u_{i n + j}) for the
/// counter-based stream keyed by the seed, so any thread partition gives the same numbers.
PassResult run_pass(const EstimationPlan& plan, std::optional<double> gradient_q = std::nullopt,
                    bool coordinatewise = false);

VarianceEstimate estimate_variance(const EstimationPlan& plan);

GradientMoment estimate_gradient_moment(const EstimationPlan& plan, double q, bool coordinatewise = false);

struct TailPoint {
    double threshold = 0.0;
    double probability = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t count = 0;
};

struct TailEstimate {
    double center = 0.0;  // empirical median when centered, else 0
    std::uint64_t n_samples = 0;
    double confidence = 0.95;
    std::vector<TailPoint> points;
};

/// Empirical P(f - center >= t) with Wilson intervals. With `bonferroni` the per-point
/// level is 1 - 0.05 / thresholds.size().
TailEstimate estimate_tail(const EstimationPlan& plan, std::span<const double> thresholds, bool center_median,
                           bool bonferroni = false);

/// Wilson score interval for k successes out of n at two-sided level `confidence`.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double confidence);

/// Midpoint order statistic (average of the two middle values when the count is even).
double empirical_median(std::vector<double> values);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_se = 0.0;
};

/// Least squares fit of log(variance) on log(dimension); at least 3 points.
ScalingFit scaling_fit(std::span<const double> dimensions, std::span<const double> variances);

nlohmann::json to_json(const Interval95& i);
nlohmann::json to_json(const VarianceEstimate& v);
nlohmann::json to_json(const GradientMoment& g);
nlohmann::json to_json(const TailEstimate& t);
nlohmann::json to_json(const ScalingFit& f);

}  // namespace htc
