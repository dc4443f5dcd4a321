// errors.hpp: exception taxonomy shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace cohdyn {

/// Invalid argument or configuration value (maps to CLI exit code 2).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical procedure failed to reach its target accuracy (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem or stream failure (CLI exit code 4).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cohdyn
