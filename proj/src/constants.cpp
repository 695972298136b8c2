#include "htc/constants.hpp"

#include <cmath>
#include <sstream>

#include "htc/errors.hpp"

namespace htc {
namespace {

using ld = long double;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

void check_cheeger(const char* who, double cheeger) {
    require(std::isfinite(cheeger) && cheeger > 0.0,
            std::string(who) + " requires a positive finite Cheeger value, got " + fmt(cheeger));
}

void check_alpha_half(const char* who, double alpha) {
    require(alpha > 0.5 && alpha < 1.0, std::string(who) + " requires 1/2 < alpha < 1, got alpha = " + fmt(alpha));
}

// Exponent denominators closer to zero than this count as the excluded endpoint; 0.8 is not exact
// in binary, so beta = 4 at alpha = 0.8 would otherwise slip inside by 1e-17.
constexpr ld kBoundaryMargin = 1e-12L;

void check_beta(const char* who, double alpha, double beta) {
    require(beta >= 1.0 && beta < alpha / (1.0 - alpha) &&
                static_cast<ld>(alpha) - static_cast<ld>(beta) * (1.0L - alpha) > kBoundaryMargin,
            std::string(who) + " requires 1 <= beta < alpha/(1-alpha), got beta = " + fmt(beta) +
                " at alpha = " + fmt(alpha));
}

void check_gamma_strict(const char* who, double alpha, double gamma) {
    require(gamma >= 1.0 && gamma < alpha / (1.0 - alpha) &&
                static_cast<ld>(alpha) + static_cast<ld>(gamma) * alpha - gamma > kBoundaryMargin,
            std::string(who) + " requires 1 <= gamma < alpha/(1-alpha), got gamma = " + fmt(gamma) +
                " at alpha = " + fmt(alpha));
}

BoundConstants finish(std::string name, ld value, std::string note, ConstantRequest in) {
    const double v = static_cast<double>(value);
    if (!(std::isfinite(v) && v > 0.0)) {
        throw NumericalError(name + " evaluated to a non-finite or non-positive value (" + fmt(v) + ")");
    }
    return BoundConstants{std::move(name), v, std::move(note), in};
}

ld c2_value(ld a, ld g, ld I) {
    return std::pow(I, g / a) * std::pow(a / (1.0L - a), g) * (g * (1.0L - a) / (a + g * a - g));
}

}  // namespace

BoundConstants c1_constant(double alpha, double beta, double gamma, double cheeger) {
    constexpr const char* who = "truncation constant c1";
    check_alpha_half(who, alpha);
    check_beta(who, alpha, beta);
    require(gamma >= 1.0 && gamma <= beta, std::string(who) + " requires 1 <= gamma <= beta, got gamma = " +
                                               fmt(gamma) + ", beta = " + fmt(beta));
    check_cheeger(who, cheeger);
    const ld a = alpha, b = beta, g = gamma, I = cheeger;
    const ld value = 1.0L + std::pow(I, b / a) * std::pow(a / (1.0L - a), b) * (a / (a - b * (1.0L - a))) *
                                std::pow(2.0L, g - (g - 1.0L) * b * (1.0L - a) / a);
    return finish("c1", value, "1/2 < alpha < 1, 1 <= beta < alpha/(1-alpha), 1 <= gamma <= beta",
                  {alpha, beta, gamma, cheeger, std::nullopt});
}

LemmaConstants c2_c3_c4_constants(double alpha, double beta, double gamma, double cheeger) {
    constexpr const char* who = "constants c2, c3, c4";
    check_alpha_half(who, alpha);
    check_gamma_strict(who, alpha, gamma);
    require(beta >= 1.0 && std::isfinite(beta), std::string(who) + " require beta >= 1, got beta = " + fmt(beta));
    check_cheeger(who, cheeger);
    const ld a = alpha, b = beta, g = gamma, I = cheeger;
    const ld c2 = c2_value(a, g, I);
    const ld c3 = std::pow(2.0L * c2, -a / (a + g * a - g));
    const ld c4 = std::pow(c3, b - 1.0L) / 2.0L;
    const ConstantRequest in{alpha, beta, gamma, cheeger, std::nullopt};
    const std::string note = "1/2 < alpha < 1, 1 <= gamma < alpha/(1-alpha), beta >= 1";
    return {finish("c2", c2, note, in), finish("c3", c3, note, in), finish("c4", c4, note, in)};
}

BoundConstants C1_theorem_constant(double alpha, double beta, double cheeger) {
    constexpr const char* who = "(alpha, beta)-Poincare constant C1";
    check_alpha_half(who, alpha);
    check_beta(who, alpha, beta);
    check_cheeger(who, cheeger);
    const ld a = alpha, b = beta, I = cheeger;
    const ld bracket = 1.0L + 2.0L * std::pow(I, b / a) * std::pow(a / (1.0L - a), b) * (a / (a - b * (1.0L - a)));
    return finish("C1", std::pow(I, a - b * (1.0L - a)) * bracket,
                  "1/2 < alpha < 1, 1 <= beta < alpha/(1-alpha)", {alpha, beta, std::nullopt, cheeger, std::nullopt});
}

BoundConstants C2_theorem_constant(double alpha, double cheeger) {
    constexpr const char* who = "L2 Poincare constant C2";
    require(alpha > 2.0 / 3.0 && alpha < 1.0 && 3.0L * alpha - 2.0L > 0.0L,
            std::string(who) + " requires 2/3 < alpha < 1, got alpha = " + fmt(alpha));
    check_cheeger(who, cheeger);
    const ld a = alpha, I = cheeger;
    const ld inner = 2.0L * std::pow(I, 2.0L / a) * (2.0L * a * a / ((3.0L * a - 2.0L) * (1.0L - a)));
    const ld value = std::pow(2.0L, (16.0L * a - 10.0L) / a) * std::pow(I, (6.0L * a - 4.0L) / a) *
                     std::pow(inner, 2.0L * (1.0L - a) / a);
    return finish("C2", value, "2/3 < alpha < 1; Poincare exponent (3 alpha - 2)/alpha",
                  {alpha, std::nullopt, std::nullopt, cheeger, std::nullopt});
}

BoundConstants C3_theorem_constant(double alpha, double cheeger) {
    constexpr const char* who = "L1 Cheeger-type constant C3";
    check_alpha_half(who, alpha);
    check_cheeger(who, cheeger);
    const ld a = alpha, I = cheeger;
    const ld value = 2.0L * std::pow(2.0L * I, (2.0L * a - 1.0L) / a) *
                     std::pow(2.0L * std::pow(I, 1.0L / a) * (a / (2.0L * a - 1.0L)), (1.0L - a) / a);
    return finish("C3", value, "1/2 < alpha < 1; exponent (2 alpha - 1)/alpha",
                  {alpha, std::nullopt, std::nullopt, cheeger, std::nullopt});
}

BoundConstants pareto_C_lambda(double lambda) {
    require(std::isfinite(lambda) && lambda > 3.0,
            "Pareto variance constant C(lambda) requires lambda > 3, got lambda = " + fmt(lambda));
    const ld l = lambda;
    const ld value = std::pow(2.0L, (6.0L * l - 16.0L) / (l - 1.0L)) * std::pow(l - 1.0L, -(2.0L * l - 6.0L) / l) *
                     std::pow(4.0L / (l - 3.0L), 2.0L / (l - 1.0L));
    return finish("C_lambda", value, "lambda > 3; variance bound C(lambda) n^(2/(lambda-1))",
                  {(lambda - 1.0) / lambda, std::nullopt, std::nullopt,
                   static_cast<double>(std::pow(l - 1.0L, -(l - 1.0L) / l)), lambda});
}

BoundConstants pareto_C_lambda_proof_variant(double lambda) {
    require(std::isfinite(lambda) && lambda > 3.0,
            "Pareto variance constant C(lambda) requires lambda > 3, got lambda = " + fmt(lambda));
    const double alpha = (lambda - 1.0) / lambda;
    const double cheeger = static_cast<double>(std::pow(static_cast<ld>(lambda) - 1.0L, -static_cast<ld>(lambda) / (lambda - 1.0L)));
    BoundConstants c = C2_theorem_constant(alpha, cheeger);
    c.name = "C_lambda_proof_variant";
    c.domain_note = "lambda > 3; C2((lambda-1)/lambda, (lambda-1)^(-lambda/(lambda-1)))";
    c.inputs.lambda = lambda;
    return c;
}

BoundConstants pareto_cheeger_bound(double lambda) {
    require(std::isfinite(lambda) && lambda > 2.0,
            "Pareto Cheeger bound requires lambda > 2, got lambda = " + fmt(lambda));
    const ld l = lambda;
    const ld value = std::pow(l - 1.0L, -(l - 1.0L) / l);
    const double alpha = static_cast<double>((l - 1.0L) / l);
    return finish("pareto_cheeger", value, "lambda > 2; alpha = (lambda-1)/lambda",
                  {alpha, std::nullopt, std::nullopt, static_cast<double>(value), lambda});
}

std::vector<BoundConstants> extremal_constants(double alpha, double cheeger) {
    constexpr const char* who = "extremal law parameters";
    require(alpha > 0.0 && alpha < 1.0, std::string(who) + " require 0 < alpha < 1, got alpha = " + fmt(alpha));
    check_cheeger(who, cheeger);
    const ld a = alpha, I = cheeger;
    const ld scale = ((1.0L - a) / a) * std::pow(I, -1.0L / a) * std::pow(2.0L, (a - 1.0L) / a);
    const ld b = 1.0L / (1.0L - a);
    const ConstantRequest in{alpha, std::nullopt, std::nullopt, cheeger, std::nullopt};
    return {finish("extremal_a", scale, "0 < alpha < 1", in), finish("extremal_b", b, "0 < alpha < 1", in)};
}

std::vector<BoundConstants> constants_table(const ConstantRequest& r, std::vector<std::string>* skipped) {
    std::vector<BoundConstants> out;
    auto attempt = [&](auto&& fn) {
        try {
            fn();
        } catch (const DomainError& e) {
            if (skipped) skipped->emplace_back(e.what());
        }
    };
    if (r.lambda) {
        const double l = *r.lambda;
        attempt([&] { out.push_back(pareto_cheeger_bound(l)); });
        attempt([&] { out.push_back(pareto_C_lambda(l)); });
        attempt([&] { out.push_back(pareto_C_lambda_proof_variant(l)); });
    }
    if (r.alpha > 0.0) {
        const double beta = r.beta.value_or(1.0);
        const double gamma = r.gamma.value_or(1.0);
        attempt([&] { out.push_back(c1_constant(r.alpha, beta, gamma, r.cheeger)); });
        attempt([&] {
            auto lc = c2_c3_c4_constants(r.alpha, beta, gamma, r.cheeger);
            out.push_back(lc.c2);
            out.push_back(lc.c3);
            out.push_back(lc.c4);
        });
        attempt([&] { out.push_back(C1_theorem_constant(r.alpha, beta, r.cheeger)); });
        attempt([&] { out.push_back(C2_theorem_constant(r.alpha, r.cheeger)); });
        attempt([&] { out.push_back(C3_theorem_constant(r.alpha, r.cheeger)); });
        attempt([&] {
            for (auto& c : extremal_constants(r.alpha, r.cheeger)) out.push_back(c);
        });
    }
    return out;
}

nlohmann::json to_json(const ConstantRequest& r) {
    nlohmann::json j{{"alpha", r.alpha}, {"cheeger", r.cheeger}};
    j["beta"] = r.beta ? nlohmann::json(*r.beta) : nlohmann::json(nullptr);
    j["gamma"] = r.gamma ? nlohmann::json(*r.gamma) : nlohmann::json(nullptr);
    j["lambda"] = r.lambda ? nlohmann::json(*r.lambda) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const BoundConstants& c) {
    return {{"name", c.name}, {"value", c.value}, {"domain_note", c.domain_note}, {"inputs", to_json(c.inputs)}};
}

}  // namespace htc
