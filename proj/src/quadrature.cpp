#include "translab/quadrature.hpp"

#include "translab/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <cmath>

namespace translab {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           QuadratureTolerance tol)
{
  if (a == b)
    return {};
  constexpr unsigned max_depth = 24;
  double error = 0.0;
  double l1 = 0.0;
  // mapped onto [0, 1]: boost's error estimate has a floor that swamps short intervals
  const double w = b - a;
  auto unit = [&f, a, w](double t) { return w * f(a + w * t); };
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(unit, 0.0, 1.0, max_depth, tol.relative, &error, &l1);
  l1 = std::abs(l1);
  if (!std::isfinite(value))
    throw QuadratureError(fmt::format("non-finite integral on [{}, {}]", a, b), value, error);
  const double allowed = std::max(tol.relative * std::abs(value), tol.absolute);
  // Boost measures its tolerance against the L1 norm; accept that as well
  // when the integrand has no cancellation to speak of.
  if (error > allowed && error > tol.relative * l1)
    throw QuadratureError(
        fmt::format("quadrature on [{}, {}] stalled at error {:.3e} (allowed {:.3e})", a, b, error, allowed),
        value, error);
  return {value, error};
}

} // namespace translab
