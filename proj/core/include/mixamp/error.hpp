#pragma once

#include <stdexcept>
#include <string>

namespace mixamp {

/// Invalid user-supplied configuration or parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-finite iterate, divergence, non-convergence (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mixamp
