#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "htc/lipschitz.hpp"
#include "htc/measures.hpp"
#include "htc/montecarlo.hpp"
#include "htc/report.hpp"

namespace htc {

/// Reports plus plot-ready tables (rows of plain numbers keyed by column name).
struct ExperimentOutput {
    std::vector<BoundReport> reports;
    nlohmann::json data = nlohmann::json::object();

    Verdict verdict() const { return combine(reports); }
    void append(ExperimentOutput other);
};

/// Sampling knobs shared by the Monte Carlo verifiers.
struct SamplingConfig {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::uint32_t batches = 32;
    unsigned threads = 0;

    nlohmann::json describe() const;
};

struct ParetoTheoremConfig {
    double lambda = 5.0;
    std::vector<std::size_t> dims{16, 64, 256, 1024};
    std::string function = "max";
    double slope_tolerance = 0.1;
    SamplingConfig sampling;
};

/// Var(f) under mu_lambda^n against C(lambda) n^(2/(lambda-1)) for every n, and the
/// log-log slope against 2/(lambda-1) when at least 3 dimensions are given.
/// n = 1 adds the analytic one-dimensional check.
ExperimentOutput verify_pareto_theorem(const ParetoTheoremConfig& config);

/// Analytic Var of the Pareto law against C(lambda) for each lambda > 3.
ExperimentOutput pareto_one_dimensional_checks(const std::vector<double>& lambdas);

/// A Poincare-type certificate: exponent alpha and constant for the measure.
struct PoincareCertificate {
    double alpha = 0.0;
    double value = 0.0;
    std::string source;

    nlohmann::json describe() const;
};

/// C2(alpha, I) from an alpha-Cheeger bound, Poincare exponent (3 alpha - 2)/alpha.
PoincareCertificate l2_certificate(double cheeger_alpha, double cheeger);
/// C1(alpha, 2, I) from an alpha-Cheeger bound, exponent 3 alpha - 2.
PoincareCertificate l1_certificate(double cheeger_alpha, double cheeger);

struct ProductTheoremConfig {
    MeasurePtr measure;
    std::optional<PoincareCertificate> certificate;
    std::string function = "max";
    std::size_t n = 64;
    SamplingConfig sampling;
};

/// Var(f) <= C2 n^(1-alpha) (E|grad f|^2)^alpha, with the gradient moment taken at the
/// lower end of its interval.
ExperimentOutput verify_product_theorem(const ProductTheoremConfig& config);

enum class CertificateKind { c1, c2 };

struct DpTheoremConfig {
    MeasurePtr measure;
    CertificateKind kind = CertificateKind::c1;
    std::optional<PoincareCertificate> certificate;
    double p = 2.0;
    std::string function = "scaled_sum";
    std::size_t n = 16;
    SamplingConfig sampling;
};

/// Variance bound for d_p-1-Lipschitz functions. The C1 branch uses exponent
/// alpha (p-1)/p and accepts 1 < p <= inf; the C2 branch uses 2 alpha (p-1)/p and 1 < p <= 2.
ExperimentOutput verify_dp_theorem(const DpTheoremConfig& config);

struct TailBoundConfig {
    MeasurePtr measure;
    double alpha = 0.8;  // 1 selects the classical exponential bound
    std::optional<double> cheeger;
    std::vector<double> thresholds{0.5, 1.0, 2.0, 4.0};
    bool bonferroni = true;
    SamplingConfig sampling;
};

/// Empirical median-centred tails of the identity against 1/2 (a t + 1)^(1-b), or
/// 1/2 exp(-t / I) when alpha = 1. Where the measure's exact tail attains the bound the
/// row is an equality check.
ExperimentOutput verify_tail_bounds(const TailBoundConfig& config);

/// Closed-form tail bound used by verify_tail_bounds.
double tail_bound(double alpha, double cheeger, double t);

struct IsoperimetricConfig {
    MeasurePtr measure;
    std::optional<PoincareCertificate> certificate;
    Box a;
    Box b;
};

/// d(A, B) <= n^((1-alpha)/2) sqrt(C2 / (mu^n(A) mu^n(B))) with exact box measures.
ExperimentOutput verify_isoperimetric(const IsoperimetricConfig& config);

/// Classical Poincare constant when known in closed form (Laplace: 4/t^2, uniform: (b-a)^2/pi^2).
std::optional<double> known_poincare_constant(const Measure& measure);

/// mu^n of an axis-aligned box via products of one-dimensional masses.
double box_measure(const Measure& measure, const Box& box);

struct SharpPoincareConfig {
    MeasurePtr measure;
    std::optional<double> poincare_constant;
    double p = 1.5;
    std::vector<std::size_t> dims{8, 27, 64};
    double slope_tolerance = 0.05;
    SamplingConfig sampling;
};

/// Scaled sum under mu^n: Var equals n^(1-2(p-1)/p) Var_mu and sits below
/// C_P n^((2-p)/p) (sum_i E|d_i f|^(p/(p-1)))^(2(p-1)/p).
ExperimentOutput verify_sharp_poincare_dp(const SharpPoincareConfig& config);

struct RandomMatrixConfig {
    double lambda = 5.0;
    std::size_t n = 50;
    std::uint64_t trials = 500;
    std::size_t eigen_index = 1;  // 1 = largest
    std::uint64_t seed = 1;
    std::uint32_t batches = 20;
    unsigned threads = 0;
};

/// Var(lambda_i) of symmetric matrices with i.i.d. Pareto entries on and above the
/// diagonal against 2 C(lambda) (n(n-1)/2)^(2/(lambda-1)); the n(n+1)/2 variant is
/// reported alongside.
ExperimentOutput verify_random_matrix(const RandomMatrixConfig& config);

/// Hoffman-Wielandt on `pairs` seeded pairs of n x n matrices with standard normal entries.
ExperimentOutput hoffman_wielandt_battery(std::size_t n, std::size_t pairs, std::uint64_t seed);

struct TightnessConfig {
    double alpha = 0.8;
    std::vector<double> ms{2, 4, 8, 16, 32, 64, 128, 256};
    double alpha1 = 0.6;
    double alpha2 = 0.85;
    double closed_form_tolerance = 1e-9;  // relative
    double slope_tolerance = 0.01;        // relative
};

struct RampMoments {
    double m = 0.0;
    double mean = 0.0;           // E f_m
    double second = 0.0;         // E f_m^2
    double variance = 0.0;
    double grad_first = 0.0;     // E|f_m'|
    double grad_second = 0.0;    // E|f_m'|^2
    double median = 0.0;         // m(f_m)
    double abs_dev = 0.0;        // E|f_m - m(f_m)|
};

/// Closed forms for f_m = (x - m)_+ under the Pareto law with lambda = 1/(1-alpha).
RampMoments ramp_moments(double alpha, double m);

/// Closed forms against quadrature, log-log slopes of Var and E|f'|^2 in m, and
/// divergence of Var/(E|f'|^2)^alpha1 and E|f - m(f)|/(E|f'|)^alpha2.
ExperimentOutput tightness_report(const TightnessConfig& config);

/// One verifier invocation inside a suite.
struct SuiteJob {
    std::string name;
    std::function<ExperimentOutput(std::uint64_t seed, unsigned threads)> run;
};

struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    ExperimentOutput output;
};

/// The full battery with default sizes. Per-job seeds come from derive_seed(master, name).
std::vector<SuiteJob> acceptance_jobs();

/// Runs jobs on up to `threads` workers (0 = hardware concurrency); results keep job
/// order. A job that throws yields a single failing report carrying the message.
std::vector<SuiteResult> run_suite(const std::vector<SuiteJob>& jobs, std::uint64_t master_seed,
                                   unsigned threads = 0);

std::string to_string(CertificateKind kind);
nlohmann::json to_json(const ExperimentOutput& out);

}  // namespace htc
