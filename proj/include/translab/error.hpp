#pragma once

#include <stdexcept>
#include <string>

namespace translab {

/// Base class of every error raised by the library.
///
/// The CLI maps the two families onto process exit codes: validation errors
/// (bad input, failed hypotheses) exit with 1, numerical errors exit with 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --- validation family --------------------------------------------------

class ValidationError : public Error {
public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. a radius not in (0,1]).
class DomainError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class ParameterError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// A ball or cylinder is not contained in the region it must lie in.
class GeometryError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// The grid is too coarse for the requested scale.
class ResolutionError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// Malformed configuration; `line` is 1-based, 0 when unknown.
class ConfigError : public ValidationError {
public:
  ConfigError(const std::string& what, int line);
  int line() const noexcept { return line_; }

private:
  int line_;
};

// --- numerical family ---------------------------------------------------

class NumericalError : public Error {
public:
  using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public NumericalError {
public:
  QuadratureError(const std::string& what, double partial, double error_estimate);
  double partial_value() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_; }

private:
  double partial_;
  double error_;
};

/// Iterative solver hit its iteration cap.
class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, double residual, int iterations);
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double residual_;
  int iterations_;
};

} // namespace translab
