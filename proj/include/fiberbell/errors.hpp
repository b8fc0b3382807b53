#pragma once

#include <stdexcept>
#include <string>

namespace fiberbell {

// Malformed or inconsistent run configuration (CLI maps this to exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical validity failure: quadrature self-check, model validity range,
// degenerate inputs to estimators (CLI maps this to exit code 3).
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fiberbell
