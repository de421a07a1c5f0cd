#pragma once

#include <stdexcept>
#include <string>

namespace membrane {

// Malformed arguments: size mismatches, bad ground sets, unsupported fields.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the region where the quantity is defined (t <= 0, s <= 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A truncation or quadrature error bound exceeded what the caller asked for.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double bound)
        : std::runtime_error(what), estimate_(estimate), bound_(bound) {}
    double estimate() const { return estimate_; }
    double bound() const { return bound_; }

private:
    double estimate_;
    double bound_;
};

// The caller flagged an evaluator as not integrable over the requested domain.
class IntegrabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation at a point where the membrane is declared non-smooth.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace membrane
