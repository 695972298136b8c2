#pragma once

#include <stdexcept>
#include <string>

namespace htc {

// Raised when an argument lies outside the hypotheses of the bound being evaluated.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when a numerical procedure cannot produce a trustworthy answer
// (non-integrable density, failed bracketing, non-finite input).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace htc
