#pragma once

#include <functional>

namespace translab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

struct QuadratureTolerance {
  double relative = 1e-8;
  double absolute = 1e-14;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Throws QuadratureError, carrying the partial value, when the error
/// estimate exceeds max(relative*|value|, absolute).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           QuadratureTolerance tol = {});

} // namespace translab
