#include "translab/problem.hpp"

#include "translab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace translab {

TransmissionProblem::TransmissionProblem(CoefficientTensor a, CoefficientTensor b, IndicatorDomain domain,
                                         VectorField boundary, std::optional<VectorField> forcing,
                                         std::string description)
    : a_(std::move(a)), b_(std::move(b)), domain_(std::move(domain)), boundary_(std::move(boundary)),
      forcing_(std::move(forcing)), description_(std::move(description))
{
  if (a_.n() != b_.n() || a_.m() != b_.m())
    throw ParameterError(fmt::format("A is {}x{} but B is {}x{} (n x m)", a_.n(), a_.m(), b_.n(), b_.m()));
  if (!boundary_)
    throw ParameterError("boundary data is empty");
  if (description_.empty())
    description_ = fmt::format("n={} m={} A={} B={} D={}", n(), m(), a_.description(), b_.description(),
                               domain_.describe());
}

bool TransmissionProblem::is_static() const noexcept
{
  return !a_.time_dependent() && !b_.time_dependent() && domain_.is_static();
}

void TransmissionProblem::effective_tensor(const Point& x, double t, std::span<double> out) const
{
  if (domain_.contains(x, t))
    b_.evaluate(x, t, out);
  else
    a_.evaluate(x, t, out);
}

std::vector<double> TransmissionProblem::effective_tensor(const Point& x, double t) const
{
  std::vector<double> out(static_cast<std::size_t>(a_.order() * a_.order()));
  effective_tensor(x, t, out);
  return out;
}

TransmissionProblem TransmissionProblem::scaled_data(double s) const
{
  VectorField g = [f = boundary_, s](const Point& x, double t, std::span<double> out) {
    f(x, t, out);
    for (double& v : out)
      v *= s;
  };
  std::optional<VectorField> forcing;
  if (forcing_)
    forcing = [f = *forcing_, s](const Point& x, double t, std::span<double> out) {
      f(x, t, out);
      for (double& v : out)
        v *= s;
    };
  return TransmissionProblem(a_, b_, domain_, std::move(g), std::move(forcing),
                             fmt::format("{} scaled {}", description_, s));
}

std::string TransmissionProblem::hash() const
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : description_) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

// -------------------------------------------------------------------------

std::vector<double> halton(std::uint64_t index, int dims)
{
  static constexpr std::array<unsigned, 12> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (dims < 1 || dims > static_cast<int>(primes.size()))
    throw ParameterError(fmt::format("halton: {} dimensions not supported", dims));
  std::vector<double> out(dims);
  for (int d = 0; d < dims; ++d) {
    const unsigned base = primes[d];
    double f = 1.0;
    double v = 0.0;
    for (std::uint64_t i = index; i > 0; i /= base) {
      f /= base;
      v += f * static_cast<double>(i % base);
    }
    out[d] = v;
  }
  return out;
}

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
  double out = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    out = std::max(out, std::abs(a[k] - b[k]));
  return out;
}

TensorCheck check_tensor(const CoefficientTensor& t, int samples, bool check_dini)
{
  const int n = t.n();
  const int order = t.order();
  const bool timed = t.time_dependent();
  std::vector<double> ax(static_cast<std::size_t>(order * order));
  std::vector<double> ay(ax.size());

  TensorCheck out;
  out.lambda_observed = std::numeric_limits<double>::infinity();
  std::optional<Witness> ellip_witness, bound_witness, dini_witness;

  for (int k = 1; k <= samples; ++k) {
    const auto h = halton(static_cast<std::uint64_t>(k), n + 1);
    Point x{};
    for (int d = 0; d < n; ++d)
      x[d] = -1.0 + 2.0 * h[d];
    const double time = timed ? -h[n] : 0.0;
    t.evaluate(x, time, ax);

    const auto leg = legendre_minimum(ax, order);
    if (leg.value < out.lambda_observed) {
      out.lambda_observed = leg.value;
      if (leg.value < t.lambda())
        ellip_witness = Witness{"ellipticity", x, time, std::nullopt, leg.direction, leg.value};
    }
    double bound = 0.0;
    for (double v : ax)
      bound = std::max(bound, std::abs(v));
    if (bound > out.bound_observed) {
      out.bound_observed = bound;
      if (bound > 1.0 / t.lambda())
        bound_witness = Witness{"boundedness", x, time, std::nullopt, {}, bound};
    }
  }

  if (check_dini && t.dini()) {
    const auto& dini = *t.dini();
    double worst = 0.0;
    for (int k = 1; k <= samples; ++k) {
      const auto h = halton(static_cast<std::uint64_t>(k), 2 * n + 2);
      Point x{}, dir{};
      for (int d = 0; d < n; ++d) {
        x[d] = -1.0 + 2.0 * h[d];
        dir[d] = 2.0 * h[n + d] - 1.0;
      }
      const double len = norm(dir);
      if (len < 1e-12)
        continue;
      const double sep = std::pow(10.0, -3.0 * h[2 * n]);
      Point y = x + (sep / len) * dir;
      for (int d = 0; d < n; ++d)
        y[d] = std::clamp(y[d], -1.0, 1.0);
      const double dist = norm(x - y);
      if (!(dist > 0.0 && dist <= 1.0))
        continue;
      const double time = timed ? -h[2 * n + 1] : 0.0;
      t.evaluate(x, time, ax);
      t.evaluate(y, time, ay);
      const double q = max_abs_diff(ax, ay) / dini.modulus.value_unchecked(dist);
      if (q > worst) {
        worst = q;
        if (q > dini.seminorm)
          dini_witness = Witness{"dini", x, time, y, {}, q};
      }
    }
    out.dini_seminorm_observed = worst;
    out.dini_ok = worst <= dini.seminorm * (1.0 + 1e-12);
  }

  out.ellipticity_ok = out.lambda_observed >= t.lambda() * (1.0 - 1e-12);
  out.boundedness_ok = out.bound_observed <= (1.0 / t.lambda()) * (1.0 + 1e-12);
  if (!out.ellipticity_ok)
    out.witness = ellip_witness;
  else if (!out.boundedness_ok)
    out.witness = bound_witness;
  else if (!out.dini_ok)
    out.witness = dini_witness;
  return out;
}

std::string describe_witness(const char* which, const TensorCheck& c)
{
  if (!c.witness)
    return {};
  const auto& w = *c.witness;
  std::string s = fmt::format("{}: {} violated at x=({}, {}, {}) t={} (observed {})", which, w.condition, w.x[0],
                              w.x[1], w.x[2], w.t, w.observed);
  if (w.y)
    s += fmt::format(" with y=({}, {}, {})", (*w.y)[0], (*w.y)[1], (*w.y)[2]);
  if (!w.xi.empty()) {
    s += " direction xi=[";
    for (std::size_t k = 0; k < w.xi.size(); ++k)
      s += fmt::format("{}{:.6g}", k ? ", " : "", w.xi[k]);
    s += "]";
  }
  return s;
}

} // namespace

std::string ConditionReport::summary() const
{
  auto line = [](const char* which, const TensorCheck& c) {
    std::string s = fmt::format("{}: lambda_observed={:.6g} bound_observed={:.6g}", which, c.lambda_observed,
                                c.bound_observed);
    if (c.dini_seminorm_observed)
      s += fmt::format(" dini_seminorm_observed={:.6g}", *c.dini_seminorm_observed);
    s += c.ok() ? " ok" : " FAIL";
    return s;
  };
  std::string s = line("A", a) + "\n" + line("B", b);
  if (!a.ok())
    s += "\n" + describe_witness("A", a);
  if (!b.ok())
    s += "\n" + describe_witness("B", b);
  return s;
}

ConditionReport verify_conditions(const TransmissionProblem& p, int samples)
{
  if (samples < 1)
    throw ParameterError(fmt::format("verify_conditions needs at least one sample, got {}", samples));
  ConditionReport r;
  r.samples = samples;
  r.a = check_tensor(p.a(), samples, true);
  r.b = check_tensor(p.b(), samples, false);
  return r;
}

VerifiedProblem verify(TransmissionProblem p, int samples)
{
  auto report = verify_conditions(p, samples);
  if (!report.ok())
    throw ValidationError("coefficient conditions not satisfied\n" + report.summary());
  return VerifiedProblem(std::make_shared<const TransmissionProblem>(std::move(p)), std::move(report));
}

// -------------------------------------------------------------------------

namespace {

constexpr double kContainEps = 1e-12;

void check_resolution(int resolution)
{
  if (resolution < 32)
    throw ParameterError(fmt::format("density resolution {} below the minimum of 32", resolution));
}

// Calls f(x) for every midpoint x of a resolution^n grid over [-1,1]^n with |x| < within.
template <class F>
void for_each_ball_midpoint(int n, int resolution, double within, F&& f)
{
  const double h = 2.0 / resolution;
  std::array<int, kMaxDim> idx{};
  const double w2 = within * within;
  while (true) {
    Point x{};
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      x[d] = -1.0 + (idx[d] + 0.5) * h;
      r2 += x[d] * x[d];
    }
    if (r2 < w2)
      f(x);
    int d = 0;
    while (d < n && ++idx[d] == resolution)
      idx[d++] = 0;
    if (d == n)
      break;
  }
}

} // namespace

double rescaled_density(const IndicatorDomain& d, int n, const Point& z, double r, int resolution, double within)
{
  check_resolution(resolution);
  if (!(r > 0.0))
    throw ParameterError(fmt::format("density radius {} must be positive", r));
  for (int k = 0; k < n; ++k)
    if (std::abs(z[k]) + r > 1.0 + kContainEps)
      throw GeometryError(fmt::format("ball of radius {} at ({}, {}, {}) leaves the computational domain", r,
                                      z[0], z[1], z[2]));
  std::int64_t count = 0;
  for_each_ball_midpoint(n, resolution, within, [&](const Point& x) {
    if (d.contains(z + r * x))
      ++count;
  });
  return static_cast<double>(count) * std::pow(2.0 / resolution, n);
}

double parabolic_rescaled_density(const IndicatorDomain& d, int n, const Point& z, double s, double r,
                                  int resolution)
{
  check_resolution(resolution);
  if (!(r > 0.0))
    throw ParameterError(fmt::format("density radius {} must be positive", r));
  if (norm(z) + r > 1.0 + kContainEps || s > kContainEps || s - r * r < -1.0 - kContainEps)
    throw GeometryError(fmt::format("cylinder of radius {} at ({}, {}, {}; {}) leaves Q_1", r, z[0], z[1],
                                    z[2], s));
  const double ht = 1.0 / resolution;
  std::int64_t count = 0;
  for_each_ball_midpoint(n, resolution, 1.0, [&](const Point& x) {
    const Point y = z + r * x;
    for (int j = 0; j < resolution; ++j) {
      const double t = -1.0 + (j + 0.5) * ht;
      if (d.contains(y, s + r * r * t))
        ++count;
    }
  });
  return static_cast<double>(count) * std::pow(2.0 / resolution, n) * ht;
}

} // namespace translab
