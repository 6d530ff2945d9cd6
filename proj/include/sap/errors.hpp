#pragma once

#include <stdexcept>
#include <string>

namespace sap {

/// Raised when an input violates a documented precondition.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a quadrature, root search or fixed-point iteration fails.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double error_estimate = 0.0)
        : std::runtime_error(what), error_estimate_(error_estimate) {}

    double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

/// A formula was evaluated outside the region where it is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Primary protection cannot be met for any decoding target.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sap
