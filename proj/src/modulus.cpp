#include "translab/modulus.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace translab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v))
    throw ParameterError(fmt::format("{} must be positive and finite, got {}", what, v));
}

// Integrates g(s) ds over s in [log(1/hi), log(1/lo)], i.e. in the logarithmic
// variable r = exp(-s), one decade at a time.
double integrate_log_decades(const std::function<double(double)>& g, double lo, double hi,
                             QuadratureTolerance tol)
{
  const double s_begin = -std::log(hi);
  const double s_end = -std::log(lo);
  const double decade = std::numbers::ln10;
  double total = 0.0;
  for (double a = s_begin; a < s_end; a += decade) {
    const double b = std::min(a + decade, s_end);
    total += integrate(g, a, b, tol).value;
  }
  return total;
}

std::vector<double> decade_increments(const std::function<double(double)>& g, QuadratureTolerance tol,
                                      int first = 0)
{
  std::vector<double> out(first, 0.0);
  out.reserve(kVerdictDecades);
  const double decade = std::numbers::ln10;
  for (int k = first; k < kVerdictDecades; ++k)
    out.push_back(integrate(g, k * decade, (k + 1) * decade, tol).value);
  return out;
}

} // namespace

Modulus Modulus::power(double exponent, double scale)
{
  require_positive(exponent, "power modulus exponent");
  require_positive(scale, "power modulus scale");
  return Modulus(PowerKind{exponent, scale});
}

Modulus Modulus::log_power(double exponent, double scale)
{
  require_positive(exponent, "log-power modulus exponent");
  require_positive(scale, "log-power modulus scale");
  return Modulus(LogPowerKind{exponent, scale});
}

Modulus Modulus::tabulated(std::vector<Breakpoint> points)
{
  if (points.empty())
    throw ParameterError("tabulated modulus needs at least one breakpoint");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.r > 0.0 && p.r <= 1.0))
      throw ParameterError(fmt::format("breakpoint {} has r = {} outside (0,1]", i, p.r));
    if (!(p.value > 0.0) || !std::isfinite(p.value))
      throw ParameterError(fmt::format("breakpoint {} has non-positive value {}", i, p.value));
    if (i > 0 && !(p.r > points[i - 1].r))
      throw ParameterError(fmt::format("breakpoint radii must increase strictly (index {})", i));
    if (i > 0 && p.value < points[i - 1].value)
      throw ParameterError(fmt::format("breakpoint values must be non-decreasing (index {})", i));
  }
  return Modulus(TabulatedKind{std::move(points)});
}

double Modulus::operator()(double r) const
{
  if (!(r > 0.0 && r <= 1.0))
    throw DomainError(fmt::format("modulus evaluated at r = {} outside (0,1]", r));
  return value_unchecked(r);
}

double Modulus::value_unchecked(double r) const noexcept
{
  return std::visit(
      overloaded{
          [r](const PowerKind& k) { return k.scale * std::pow(r, k.exponent); },
          [r](const LogPowerKind& k) { return k.scale * std::pow(1.0 - std::log(r), -k.exponent); },
          [r](const TabulatedKind& k) {
            const auto& p = k.points;
            if (r <= p.front().r)
              return p.front().value;
            if (r >= p.back().r)
              return p.back().value;
            auto hi = std::upper_bound(p.begin(), p.end(), r,
                                       [](double x, const Breakpoint& b) { return x < b.r; });
            auto lo = hi - 1;
            const double t = (r - lo->r) / (hi->r - lo->r);
            return lo->value + t * (hi->value - lo->value);
          },
      },
      kind_);
}

Modulus Modulus::scaled(double factor) const
{
  require_positive(factor, "modulus scale factor");
  return std::visit(overloaded{
                        [f = factor](const PowerKind& k) { return power(k.exponent, k.scale * f); },
                        [f = factor](const LogPowerKind& k) { return log_power(k.exponent, k.scale * f); },
                        [f = factor](const TabulatedKind& k) {
                          auto pts = k.points;
                          for (auto& p : pts)
                            p.value *= f;
                          return tabulated(std::move(pts));
                        },
                    },
                    kind_);
}

std::string Modulus::describe() const
{
  return std::visit(
      overloaded{
          [](const PowerKind& k) { return fmt::format("power(alpha={}, scale={})", k.exponent, k.scale); },
          [](const LogPowerKind& k) { return fmt::format("log_power(p={}, scale={})", k.exponent, k.scale); },
          [](const TabulatedKind& k) { return fmt::format("tabulated({} points)", k.points.size()); },
      },
      kind_);
}

bool tail_decays_geometrically(std::span<const double> inc)
{
  if (inc.size() < static_cast<std::size_t>(kVerdictWindow) + 1)
    return false;
  for (std::size_t k = inc.size() - kVerdictWindow; k < inc.size(); ++k) {
    const double prev = inc[k - 1];
    const double cur = inc[k];
    if (cur <= 0.0)
      continue; // exhausted tail
    if (prev < kTailDecayFactor * cur)
      return false;
  }
  return true;
}

ConvergenceVerdict dini_integral(const Modulus& m, double r_min, QuadratureTolerance tol)
{
  if (!(r_min > 0.0 && r_min < 1.0))
    throw DomainError(fmt::format("dini_integral cutoff r_min = {} outside (0,1)", r_min));
  // omega(r)/r dr = omega(e^-s) ds
  auto g = [&m](double s) { return m.value_unchecked(std::exp(-s)); };

  ConvergenceVerdict out;
  try {
    out.value = integrate_log_decades(g, r_min, 1.0, tol);
  } catch (const QuadratureError& e) {
    throw QuadratureError(fmt::format("dini integral: {}", e.what()), e.partial_value(), e.error_estimate());
  }
  out.decade_increments = decade_increments(g, tol);
  out.convergent = tail_decays_geometrically(out.decade_increments);
  return out;
}

std::vector<double> log_decay_profile(const Modulus& m, std::span<const double> radii)
{
  std::vector<double> out;
  out.reserve(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r > 0.0 && r < 1.0))
      throw DomainError(fmt::format("log_decay_profile radius {} outside (0,1)", r));
    if (i > 0 && !(r < radii[i - 1]))
      throw ParameterError("log_decay_profile radii must be strictly decreasing");
    out.push_back(m.value_unchecked(r) * std::log(1.0 / r));
  }
  return out;
}

double psi(const Modulus& m, double rho, int n)
{
  if (n < 1)
    throw ParameterError(fmt::format("psi: dimension n = {} must be >= 1", n));
  if (!(rho > 0.0 && rho <= 0.5))
    throw DomainError(fmt::format("psi: rho = {} outside (0, 1/2]", rho));
  // omega(t)^(3n) / t^(n+1) dt = omega(e^-s)^(3n) e^(n s) ds
  auto g = [&m, n](double s) { return std::pow(m.value_unchecked(std::exp(-s)), 3 * n) * std::exp(n * s); };
  const double inner = integrate_log_decades(g, rho, 1.0, {1e-8, 1e-14});
  return std::pow(rho, 0.5 * n) + std::sqrt(std::pow(rho, n) * inner) + m.value_unchecked(rho);
}

ConvergenceVerdict lemma_a2_check(const Modulus& m, double alpha, double r_min)
{
  if (!(alpha > 1.0))
    throw ParameterError(fmt::format("lemma_a2_check requires alpha > 1, got {}", alpha));
  if (!(r_min > 0.0 && r_min < 1.0))
    throw DomainError(fmt::format("lemma_a2_check cutoff r_min = {} outside (0,1)", r_min));

  // inner(r) = int_r^1 omega^(2a)(p) / p^(a+1) dp, in the log variable
  auto inner = [&m, alpha](double r) {
    auto g = [&m, alpha](double s) {
      return std::pow(m.value_unchecked(std::exp(-s)), 2.0 * alpha) * std::exp(alpha * s);
    };
    return integrate_log_decades(g, r, 1.0, {1e-12, 1e-300});
  };
  // r^(a/2-1) sqrt(inner(r)) dr = r^(a/2) sqrt(inner(r)) ds
  auto outer = [&inner, alpha](double s) {
    const double r = std::exp(-s);
    if (s == 0.0)
      return 0.0;
    return std::pow(r, 0.5 * alpha) * std::sqrt(inner(r));
  };

  // inner(r) ~ s near r = 1; u = sqrt(s) removes the endpoint singularity
  const double decade = std::numbers::ln10;
  auto head = [&outer](double u) { return 2.0 * u * outer(u * u); };
  auto head_integral = [&](double s_hi) { return integrate(head, 0.0, std::sqrt(s_hi), {}).value; };

  ConvergenceVerdict out;
  const double s_min = -std::log(r_min);
  out.value = head_integral(std::min(decade, s_min));
  if (s_min > decade)
    out.value += integrate_log_decades(outer, r_min, std::exp(-decade), {});
  out.decade_increments = decade_increments(outer, {}, 1);
  out.decade_increments[0] = head_integral(decade);
  out.convergent = tail_decays_geometrically(out.decade_increments);
  return out;
}

Conformance check_conformance(const Modulus& m)
{
  Conformance c;
  c.omega_at_one = m.value_unchecked(1.0);
  for (int k = 0; k <= 200; ++k) {
    const double r = 0.75 * std::pow(2.0, -0.25 * k);
    c.max_log_product = std::max(c.max_log_product, m.value_unchecked(r) * std::abs(std::log(r)));
  }
  c.elliptic_ok = c.omega_at_one <= 0.5;
  c.parabolic_ok = c.max_log_product <= 0.5;
  return c;
}

} // namespace translab
