#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace htc {

/// Inputs of a constant evaluation. Unused fields stay empty.
struct ConstantRequest {
    double alpha = 0.0;
    std::optional<double> beta;
    std::optional<double> gamma;
    double cheeger = 1.0;
    std::optional<double> lambda;
};

struct BoundConstants {
    std::string name;
    double value = 0.0;
    std::string domain_note;
    ConstantRequest inputs;
};

struct LemmaConstants {
    BoundConstants c2;
    BoundConstants c3;
    BoundConstants c4;
};

// All evaluators work in long double and throw DomainError outside their
// (strict) domains. The cheeger argument must be positive.

/// Truncation constant c1; 1/2 < alpha < 1, 1 <= beta < alpha/(1-alpha), 1 <= gamma <= beta.
BoundConstants c1_constant(double alpha, double beta, double gamma, double cheeger);

/// Tail-bound, half-mass and main-inequality constants c2, c3, c4;
/// 1/2 < alpha < 1, 1 <= gamma < alpha/(1-alpha), beta >= 1.
LemmaConstants c2_c3_c4_constants(double alpha, double beta, double gamma, double cheeger);

/// (alpha, beta)-Poincare constant from an alpha-Cheeger bound; 1/2 < alpha < 1, 1 <= beta < alpha/(1-alpha).
BoundConstants C1_theorem_constant(double alpha, double beta, double cheeger);

/// L2 alpha'-Poincare constant, alpha' = (3 alpha - 2) / alpha; 2/3 < alpha < 1.
BoundConstants C2_theorem_constant(double alpha, double cheeger);

/// L1 constant with exponent (2 alpha - 1) / alpha; 1/2 < alpha < 1.
BoundConstants C3_theorem_constant(double alpha, double cheeger);

/// C(lambda) for the variance of 1-Lipschitz functions of Pareto vectors; lambda > 3.
BoundConstants pareto_C_lambda(double lambda);

/// C2((lambda-1)/lambda, (lambda-1)^(-lambda/(lambda-1))): the instantiation written in the
/// proof, reported next to pareto_C_lambda; lambda > 3.
BoundConstants pareto_C_lambda_proof_variant(double lambda);

/// Cheeger bound (lambda-1)^(-(lambda-1)/lambda) at alpha = (lambda-1)/lambda
/// (stored in inputs.alpha); lambda > 2.
BoundConstants pareto_cheeger_bound(double lambda);

/// Extremal law parameters a and b for X(alpha, cheeger); 0 < alpha < 1.
std::vector<BoundConstants> extremal_constants(double alpha, double cheeger);

/// Every constant admissible for the request. Constants whose domain excludes
/// the request are omitted; their reasons are appended to `skipped` when given.
std::vector<BoundConstants> constants_table(const ConstantRequest& request,
                                            std::vector<std::string>* skipped = nullptr);

nlohmann::json to_json(const ConstantRequest& r);
nlohmann::json to_json(const BoundConstants& c);

}  // namespace htc
