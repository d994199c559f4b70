#include "translab/error.hpp"

#include <fmt/format.h>

namespace translab {

ConfigError::ConfigError(const std::string& what, int line)
    : ValidationError(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

QuadratureError::QuadratureError(const std::string& what, double partial, double error_estimate)
    : NumericalError(what), partial_(partial), error_(error_estimate) {}

ConvergenceError::ConvergenceError(const std::string& what, double residual, int iterations)
    : NumericalError(what), residual_(residual), iterations_(iterations) {}

} // namespace translab
