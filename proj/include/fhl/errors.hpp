#pragma once
//
// fhl/errors.hpp
//
// Exception hierarchy. Everything thrown by the library derives from
// fhl::Error; the CLI maps the subtypes onto exit codes.
//

#include <stdexcept>
#include <string>
#include <complex>

namespace fhl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad arguments, bad grammar, unknown experiment names (exit code 2)
struct UsageError : Error {
    using Error::Error;
};

struct ParseError : UsageError {
    ParseError(const std::string& what, std::size_t position)
        : UsageError(what + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

struct UnsupportedSymbolError : UsageError {
    using UsageError::UsageError;
};

struct InvalidWeightError : UsageError {
    using UsageError::UsageError;
};

// numerical trouble (exit code 3)
struct NumericalError : Error {
    using Error::Error;
};

struct EvaluationError : NumericalError {
    EvaluationError(const std::string& what, std::complex<double> at)
        : NumericalError(what + " at node (" + std::to_string(at.real()) + ", "
                         + std::to_string(at.imag()) + ")"),
          node(at) {}
    std::complex<double> node;
};

struct TruncationError : NumericalError {
    using NumericalError::NumericalError;
};

struct NumericalInconsistencyError : NumericalError {
    using NumericalError::NumericalError;
};

struct ConvergenceError : NumericalError {
    ConvergenceError(const std::string& what, double res)
        : NumericalError(what + " (residual " + std::to_string(res) + ")"),
          residual(res) {}
    double residual;
};

} // namespace fhl
