#pragma once

#include <stdexcept>
#include <string>

namespace lindley {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A query falls outside the range covered by tabulated data.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The supplied bracket does not enclose a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// The objective produced a non-finite value during a search.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Quadrature hit its panel cap before reaching the requested tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

/// The operation does not support this prior scheme.
class UnsupportedSchemeError : public Error {
public:
    using Error::Error;
};

/// Two routes that must agree did not. Indicates a bug, not bad input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// No σ reproduces the requested Type I error. Carries the achievable range.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double min_alpha, double max_alpha)
        : Error(what), min_alpha_(min_alpha), max_alpha_(max_alpha) {}

    double min_alpha() const noexcept { return min_alpha_; }
    double max_alpha() const noexcept { return max_alpha_; }

private:
    double min_alpha_;
    double max_alpha_;
};

}  // namespace lindley
