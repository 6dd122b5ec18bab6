#pragma once

#include <stdexcept>
#include <string>

namespace thermolat {

// Bad run configuration (grid size, density, tolerances).
struct ConfigurationError : std::runtime_error {
    explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

// Bad call argument (arity mismatch, short word, non-probability tensor).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation not available for this input (range too large, budget exceeded,
// missing derivative data).
struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solve did not reach the requested tolerance.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

}  // namespace thermolat
