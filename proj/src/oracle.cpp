#include "translab/oracle.hpp"

#include "translab/error.hpp"
#include "translab/problem.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace translab::oracle {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(double v, const char* what)
{
  if (!(v > 0.0))
    throw ParameterError(fmt::format("{} must be positive, got {}", what, v));
}

} // namespace

ScalarSample flat_interface_branch(double a, double b, const Point& x, bool inside)
{
  require_positive(a, "flat_interface coefficient a");
  require_positive(b, "flat_interface coefficient b");
  const double slope = inside ? a / b : 1.0;
  return {slope * x[1], {0.0, slope, 0.0}};
}

ScalarSample flat_interface(double a, double b, const Point& x)
{
  return flat_interface_branch(a, b, x, x[1] > 0.0);
}

ScalarSample disk_inclusion_branch(double k, double radius, const Point& x, bool inside)
{
  require_positive(k, "disk_inclusion conductivity ratio");
  if (!(radius > 0.0 && radius < 1.0))
    throw ParameterError(fmt::format("disk_inclusion radius {} not in (0,1)", radius));
  if (inside) {
    const double c = 2.0 / (1.0 + k);
    return {c * x[0], {c, 0.0, 0.0}};
  }
  const double beta = (1.0 - k) / (1.0 + k) * radius * radius;
  const double r2 = x[0] * x[0] + x[1] * x[1];
  const double r4 = r2 * r2;
  const double u = x[0] * (1.0 + beta / r2);
  // d/dx1 [x1 + beta x1/r2] = 1 + beta (r2 - 2 x1^2)/r4 ; d/dx2 = -2 beta x1 x2 / r4
  return {u, {1.0 + beta * (x[1] * x[1] - x[0] * x[0]) / r4, -2.0 * beta * x[0] * x[1] / r4, 0.0}};
}

ScalarSample disk_inclusion(double k, double radius, const Point& x)
{
  return disk_inclusion_branch(k, radius, x, x[0] * x[0] + x[1] * x[1] < radius * radius);
}

double eigenmode_rate(std::span<const int> modes)
{
  double s = 0.0;
  for (int p : modes)
    s += static_cast<double>(p) * p;
  return pi * pi * s;
}

ScalarSample eigenmode_decay(int n, std::span<const int> modes, const Point& x, double elapsed)
{
  if (static_cast<int>(modes.size()) != n)
    throw ParameterError(fmt::format("eigenmode needs {} mode indices, got {}", n, modes.size()));
  const double amp = std::exp(-eigenmode_rate(modes) * elapsed);
  std::array<double, kMaxDim> s{1, 1, 1}, c{0, 0, 0};
  for (int d = 0; d < n; ++d) {
    s[d] = std::sin(pi * modes[d] * x[d]);
    c[d] = pi * modes[d] * std::cos(pi * modes[d] * x[d]);
  }
  ScalarSample out{amp, {0, 0, 0}};
  for (int d = 0; d < n; ++d)
    out.u *= s[d];
  for (int a = 0; a < n; ++a) {
    double g = amp;
    for (int d = 0; d < n; ++d)
      g *= (d == a) ? c[d] : s[d];
    out.grad[a] = g;
  }
  return out;
}

// -------------------------------------------------------------------------

std::vector<double> FieldOracle::value(const Point& x, double t) const
{
  std::vector<double> v(m), g(static_cast<std::size_t>(m * n));
  eval(x, t, v, g);
  return v;
}

std::vector<double> FieldOracle::gradient(const Point& x, double t) const
{
  std::vector<double> v(m), g(static_cast<std::size_t>(m * n));
  eval(x, t, v, g);
  return g;
}

namespace {

FieldOracle scalar_oracle(int n, std::string name, std::function<ScalarSample(const Point&, double)> f)
{
  FieldOracle o;
  o.n = n;
  o.m = 1;
  o.name = std::move(name);
  o.eval = [f = std::move(f), n](const Point& x, double t, std::span<double> v, std::span<double> g) {
    const auto s = f(x, t);
    v[0] = s.u;
    if (!g.empty())
      for (int a = 0; a < n; ++a)
        g[a] = s.grad[a];
  };
  return o;
}

} // namespace

FieldOracle flat_interface_oracle(double a, double b, int n)
{
  require_positive(a, "flat_interface coefficient a");
  require_positive(b, "flat_interface coefficient b");
  if (n < 2)
    throw ParameterError("flat_interface oracle needs n >= 2");
  return scalar_oracle(n, fmt::format("flat_interface(a={},b={})", a, b),
                       [a, b](const Point& x, double) { return flat_interface(a, b, x); });
}

FieldOracle disk_inclusion_oracle(double k, double radius)
{
  disk_inclusion_branch(k, radius, {1, 0, 0}, true); // validates parameters
  return scalar_oracle(2, fmt::format("disk_inclusion(k={},R={})", k, radius),
                       [k, radius](const Point& x, double) { return disk_inclusion(k, radius, x); });
}

FieldOracle eigenmode_oracle(int n, std::vector<int> modes, double t_start)
{
  if (static_cast<int>(modes.size()) != n)
    throw ParameterError(fmt::format("eigenmode needs {} mode indices, got {}", n, modes.size()));
  std::string name = "eigenmode(";
  for (std::size_t k = 0; k < modes.size(); ++k)
    name += fmt::format("{}{}", k ? "," : "", modes[k]);
  name += ")";
  return scalar_oracle(n, name, [n, modes = std::move(modes), t_start](const Point& x, double t) {
    return eigenmode_decay(n, modes, x, t - t_start);
  });
}

FieldOracle affine_oracle(int n, int m, std::vector<double> gradient, std::vector<double> offset)
{
  if (gradient.size() != static_cast<std::size_t>(m * n) || offset.size() != static_cast<std::size_t>(m))
    throw ParameterError("affine oracle: gradient must be m x n and offset of length m");
  FieldOracle o;
  o.n = n;
  o.m = m;
  o.name = "affine";
  o.eval = [n, m, g = std::move(gradient), c = std::move(offset)](const Point& x, double, std::span<double> v,
                                                                   std::span<double> grad) {
    for (int i = 0; i < m; ++i) {
      double s = c[i];
      for (int a = 0; a < n; ++a)
        s += g[i * n + a] * x[a];
      v[i] = s;
    }
    if (!grad.empty())
      std::copy(g.begin(), g.end(), grad.begin());
  };
  return o;
}

FieldOracle vector_decoupled(const FieldOracle& base, int m, std::vector<double> scales)
{
  if (base.m != 1)
    throw ParameterError("vector_decoupled needs a scalar base oracle");
  if (m < 1)
    throw ParameterError("vector_decoupled needs m >= 1");
  if (scales.empty())
    scales.assign(m, 1.0);
  if (static_cast<int>(scales.size()) != m)
    throw ParameterError("vector_decoupled: one scale per component");
  FieldOracle o;
  o.n = base.n;
  o.m = m;
  o.name = fmt::format("{}x{}", base.name, m);
  o.eval = [b = base.eval, n = base.n, m, scales = std::move(scales)](const Point& x, double t, std::span<double> v,
                                                                      std::span<double> g) {
    double u = 0.0;
    std::array<double, kMaxDim> grad{};
    b(x, t, std::span<double>(&u, 1), g.empty() ? std::span<double>() : std::span<double>(grad.data(), n));
    for (int i = 0; i < m; ++i) {
      v[i] = scales[i] * u;
      if (!g.empty())
        for (int a = 0; a < n; ++a)
          g[i * n + a] = scales[i] * grad[a];
    }
  };
  return o;
}

// -------------------------------------------------------------------------

namespace {

// Fourth-order central difference of f at x with step h.
template <class F>
double diff4(F&& f, double x, double h)
{
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

struct CheckAccumulator {
  CheckRow row;
  void add(double r)
  {
    ++row.points;
    row.max_residual = std::max(row.max_residual, std::abs(r));
  }
};

// Divergence of coef * grad u by differencing the analytic gradient.
template <class Grad>
double divergence_residual(Grad&& grad, const Point& x, int n)
{
  double div = 0.0;
  for (int a = 0; a < n; ++a)
    div += diff4(
        [&](double s) {
          Point y = x;
          y[a] = s;
          return grad(y)[a];
        },
        x[a], kFdStep);
  return div;
}

template <class Value, class Grad>
double gradient_mismatch(Value&& value, Grad&& grad, const Point& x, int n)
{
  double worst = 0.0;
  const auto g = grad(x);
  for (int a = 0; a < n; ++a) {
    const double fd = diff4(
        [&](double s) {
          Point y = x;
          y[a] = s;
          return value(y);
        },
        x[a], kFdStep);
    worst = std::max(worst, std::abs(fd - g[a]));
  }
  return worst;
}

} // namespace

std::vector<CheckRow> run_checks(std::int64_t points)
{
  if (points < 1)
    throw ParameterError("run_checks needs at least one point");
  std::vector<CheckRow> rows;
  constexpr double tol = 1e-10;

  // flat interface, a=1, b=4
  {
    const double a = 1.0, b = 4.0;
    const std::string name = "flat_interface(a=1,b=4)";
    CheckAccumulator strong{{name, "strong_form", 0, 0.0, tol}};
    CheckAccumulator grad{{name, "gradient_fd", 0, 0.0, tol}};
    CheckAccumulator flux{{name, "flux_jump", 0, 0.0, tol}};
    CheckAccumulator trace{{name, "trace_jump", 0, 0.0, tol}};
    for (std::int64_t k = 1; k <= points; ++k) {
      const auto h = halton(static_cast<std::uint64_t>(k), 2);
      const Point x{-1.0 + 2.0 * h[0], -1.0 + 2.0 * h[1], 0.0};
      if (std::abs(x[1]) > kInterfaceMargin) {
        const bool in = x[1] > 0.0;
        const double coef = in ? b : a;
        auto g = [&](const Point& y) { return flat_interface_branch(a, b, y, in).grad; };
        auto v = [&](const Point& y) { return flat_interface_branch(a, b, y, in).u; };
        strong.add(coef * divergence_residual(g, x, 2));
        grad.add(gradient_mismatch(v, g, x, 2));
      }
      const Point on{x[0], 0.0, 0.0};
      const auto below = flat_interface_branch(a, b, on, false);
      const auto above = flat_interface_branch(a, b, on, true);
      flux.add(a * below.grad[1] - b * above.grad[1]);
      trace.add(below.u - above.u);
    }
    for (auto* c : {&strong, &grad, &flux, &trace})
      rows.push_back(c->row);
  }

  // disk inclusion, k=2, R=0.5
  {
    const double kk = 2.0, radius = 0.5;
    const std::string name = "disk_inclusion(k=2,R=0.5)";
    CheckAccumulator strong{{name, "strong_form", 0, 0.0, tol}};
    CheckAccumulator grad{{name, "gradient_fd", 0, 0.0, tol}};
    CheckAccumulator flux{{name, "flux_jump", 0, 0.0, tol}};
    CheckAccumulator trace{{name, "trace_jump", 0, 0.0, tol}};
    for (std::int64_t k = 1; k <= points; ++k) {
      const auto h = halton(static_cast<std::uint64_t>(k), 2);
      const Point x{-1.0 + 2.0 * h[0], -1.0 + 2.0 * h[1], 0.0};
      const double r = std::hypot(x[0], x[1]);
      if (std::abs(r - radius) > kInterfaceMargin) {
        const bool in = r < radius;
        const double coef = in ? kk : 1.0;
        auto g = [&](const Point& y) { return disk_inclusion_branch(kk, radius, y, in).grad; };
        auto v = [&](const Point& y) { return disk_inclusion_branch(kk, radius, y, in).u; };
        strong.add(coef * divergence_residual(g, x, 2));
        grad.add(gradient_mismatch(v, g, x, 2));
      }
      const double theta = 2.0 * pi * h[0];
      const Point nu{std::cos(theta), std::sin(theta), 0.0};
      const Point on = radius * nu;
      const auto inner = disk_inclusion_branch(kk, radius, on, true);
      const auto outer = disk_inclusion_branch(kk, radius, on, false);
      flux.add(kk * dot(inner.grad, nu) - dot(outer.grad, nu));
      trace.add(inner.u - outer.u);
    }
    for (auto* c : {&strong, &grad, &flux, &trace})
      rows.push_back(c->row);
  }

  // eigenmodes: d_t u - lap u = 0
  for (const std::vector<int>& modes : {std::vector<int>{1, 1}, std::vector<int>{2, 1}}) {
    const std::string name = fmt::format("eigenmode({},{})", modes[0], modes[1]);
    CheckAccumulator strong{{name, "strong_form", 0, 0.0, tol}};
    CheckAccumulator grad{{name, "gradient_fd", 0, 0.0, tol}};
    const double rate = eigenmode_rate(modes);
    for (std::int64_t k = 1; k <= points; ++k) {
      const auto h = halton(static_cast<std::uint64_t>(k), 3);
      const Point x{-1.0 + 2.0 * h[0], -1.0 + 2.0 * h[1], 0.0};
      const double t = 0.1 * h[2] + 2 * kFdStep;
      auto g = [&](const Point& y) { return eigenmode_decay(2, modes, y, t).grad; };
      auto v = [&](const Point& y) { return eigenmode_decay(2, modes, y, t).u; };
      const double dt = diff4([&](double s) { return eigenmode_decay(2, modes, x, s).u; }, t, kFdStep);
      // scale by 1/rate so the residual is relative to the size of each term
      strong.add((dt - divergence_residual(g, x, 2)) / rate);
      grad.add(gradient_mismatch(v, g, x, 2));
    }
    rows.push_back(strong.row);
    rows.push_back(grad.row);
  }

  // vector decoupling: every component equals its scaled scalar copy
  {
    const auto base = flat_interface_oracle(1.0, 4.0);
    const auto vec = vector_decoupled(base, 2, {1.0, 3.0});
    CheckAccumulator comp{{"flat_interface x2 (scales 1,3)", "component_match", 0, 0.0, 0.0}};
    for (std::int64_t k = 1; k <= std::min<std::int64_t>(points, 10000); ++k) {
      const auto h = halton(static_cast<std::uint64_t>(k), 2);
      const Point x{-1.0 + 2.0 * h[0], -1.0 + 2.0 * h[1], 0.0};
      const auto s = base.value(x)[0];
      const auto v = vec.value(x);
      comp.add(std::max(std::abs(v[0] - s), std::abs(v[1] - 3.0 * s)));
    }
    rows.push_back(comp.row);
  }
  return rows;
}

} // namespace translab::oracle
