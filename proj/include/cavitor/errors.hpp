#pragma once

#include <stdexcept>
#include <string>

namespace cavitor {

/// Bad user-supplied parameter (out-of-range order, invalid flat end, ...).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Inconsistent run setup (geometry/bc mismatch, CFL violation, missing file, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Grid or sampling too coarse for the requested content.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iteration failed to converge, NaN/Inf detected, quadrature tolerance unreachable.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Point outside the computational domain.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

} // namespace cavitor
