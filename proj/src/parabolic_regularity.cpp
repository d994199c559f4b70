#include "translab/error.hpp"
#include "translab/regularity.hpp"

#include "regularity_detail.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace translab {

using namespace detail;

namespace {

constexpr double kTimeEps = 1e-12;

double max_level_gap(const FieldSeries& u)
{
  double gap = 0.0;
  const auto& t = u.times();
  for (std::size_t k = 1; k < t.size(); ++k)
    gap = std::max(gap, t[k] - t[k - 1]);
  return gap;
}

} // namespace

double ParabolicFit::gradient_norm() const
{
  return frobenius(gradient);
}

ParabolicFit parabolic_affine_fit(const FieldSeries& u, const Point& z, double s, double r,
                                  const AnalysisOptions& opt)
{
  const Grid& g = u.grid();
  const int n = g.n();
  const int m = u.m();
  check_ball(n, z, r);
  check_radius(g, r, opt.min_cells_per_radius);
  const auto& times = u.times();
  if (times.size() < 2)
    throw ResolutionError("a space-time fit needs at least two stored levels");
  if (s - r * r < times.front() - kTimeEps || s > times.back() + kTimeEps)
    throw DomainError(fmt::format("cylinder ({} - {}, {}) leaves the computed range [{}, {}]", s, r * r, s,
                                  times.front(), times.back()));
  const double dt = max_level_gap(u);
  if (r * r < 4.0 * dt * (1.0 - 1e-12))
    throw ResolutionError(fmt::format("r^2 = {} is below 4 dt = {}", r * r, 4.0 * dt));

  std::vector<std::size_t> levels;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] >= s - r * r - kTimeEps && times[k] <= s + kTimeEps)
      levels.push_back(k);

  // trapezoid weights over the stored levels in the cylinder
  std::vector<double> tw(levels.size(), 1.0);
  if (levels.size() > 1)
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double lo = j > 0 ? times[levels[j - 1]] : times[levels[j]];
      const double hi = j + 1 < levels.size() ? times[levels[j + 1]] : times[levels[j]];
      tw[j] = 0.5 * (hi - lo);
    }

  std::vector<BallCell> cells;
  for_each_ball_cell(grid_lattice(g), z, r, opt.subsamples, [&](const BallCell& c) { cells.push_back(c); });

  ParabolicFit fit;
  fit.z = z;
  fit.s = s;
  fit.r = r;
  fit.levels = static_cast<int>(levels.size());
  fit.gradient.assign(static_cast<std::size_t>(m * n), 0.0);
  fit.value.assign(m, 0.0);
  std::vector<double> val(m), grad(static_cast<std::size_t>(m * n));
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const auto values = u.level_values(levels[j]);
    for (const auto& c : cells) {
      sample_nodal(g, m, values, c.center, val, grad);
      const double w = tw[j] * c.fraction;
      for (std::size_t k = 0; k < grad.size(); ++k)
        fit.gradient[k] += w * grad[k];
      weight_sum += w;
    }
  }
  for (auto& v : fit.gradient)
    v /= weight_sum;

  u.sample(z, s, fit.value, grad);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const auto values = u.level_values(levels[j]);
    double sum = 0.0;
    for (const auto& c : cells)
      for (std::size_t q = 0; q < c.points.size(); ++q) {
        sample_nodal(g, m, values, c.points[q], val, {});
        double e = 0.0;
        for (int i = 0; i < m; ++i) {
          double d = val[i] - fit.value[i];
          for (int a = 0; a < n; ++a)
            d -= fit.gradient[i * n + a] * (c.points[q][a] - z[a]);
          e += d * d;
        }
        sum += c.weights[q] * e;
      }
    fit.sup_t_residual = std::max(fit.sup_t_residual, sum / std::pow(r, n + 2));
  }
  fit.log_bound_ratio = fit.gradient_norm() / std::abs(std::log(r));
  return fit;
}

DyadicReport analyze_parabolic_center(const VerifiedProblem* p, const FieldSeries& u, const Point& z, double s,
                                      const std::vector<double>& scales, double threshold,
                                      const AnalysisOptions& opt)
{
  check_scales(scales);
  const int n = u.grid().n();
  const int res = opt.parabolic_density_resolution > 0 ? opt.parabolic_density_resolution : (n == 2 ? 128 : 32);
  DyadicReport rep;
  rep.n = n;
  rep.z = z;
  rep.s = s;
  rep.threshold = threshold;
  std::vector<double> norms;
  for (double r : scales) {
    DyadicRow row;
    row.r = r;
    try {
      const auto fit = parabolic_affine_fit(u, z, s, r, opt);
      row.grad_l_norm = fit.gradient_norm();
      row.sup_t_residual = fit.sup_t_residual;
      row.log_bound_ratio = fit.log_bound_ratio;
      norms.push_back(*row.grad_l_norm);
    } catch (const ResolutionError&) {
    } catch (const DomainError&) {
    }
    if (p) {
      const auto& d = (*p)->domain();
      row.density = parabolic_rescaled_density(d, n, z, s, r, res);
      row.density_rhs = *row.density / std::ldexp(1.0, n + 2);
      if (row.grad_l_norm && *row.grad_l_norm >= threshold) {
        const double lhs = parabolic_rescaled_density(d, n, z, s, 0.5 * r, res);
        const double w = slack_modulus(*p, opt)(r);
        row.slack = (lhs - *row.density_rhs) / std::pow(w, 3 * n + 4);
      }
    }
    rep.rows.push_back(row);
  }
  rep.tag = classify(norms, threshold);
  return rep;
}

DyadicReport parabolic_density_decay(const VerifiedProblem& p, const FieldSeries& u, const Point& z, double s,
                                     const std::vector<double>& scales, double threshold,
                                     const AnalysisOptions& opt)
{
  if (!(threshold > 0.0))
    throw ParameterError(fmt::format("threshold M = {} must be positive", threshold));
  return analyze_parabolic_center(&p, u, z, s, scales, threshold, opt);
}

double parabolic_distance(const SpacetimePoint& a, const SpacetimePoint& b)
{
  const Point d = a.x - b.x;
  return std::sqrt(dot(d, d) + std::abs(a.t - b.t));
}

namespace {

bool in_half_cylinder(const SpacetimePoint& x)
{
  return norm(x.x) <= 0.5 + 1e-12 && x.t <= kTimeEps && x.t >= -0.25 - kTimeEps;
}

std::vector<double> value_at(const FieldSeries& u, const SpacetimePoint& x)
{
  std::vector<double> v(u.m());
  u.sample(x.x, x.t, v, {});
  return v;
}

double distance(const std::vector<double>& a, const std::vector<double>& b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

} // namespace

HolderReport holder_time_exponent(const FieldSeries& u,
                                  const std::vector<std::pair<SpacetimePoint, SpacetimePoint>>& pairs,
                                  const TimeProbe& probe)
{
  if (pairs.empty() && probe.gaps.empty())
    throw ParameterError("no point pairs and no time gaps given");
  const double min_sep = 2.0 * std::max(u.grid().h(), std::sqrt(max_level_gap(u)));
  HolderReport rep;
  for (const auto& [x, y] : pairs) {
    if (!in_half_cylinder(x) || !in_half_cylinder(y))
      throw GeometryError("pair point outside Q_{1/2}");
    const double dp = parabolic_distance(x, y);
    if (dp == 0.0)
      throw ParameterError("degenerate pair: coincident points");
    if (dp < min_sep * (1.0 - 1e-12))
      throw ResolutionError(fmt::format("pair separation {} is below {}", dp, min_sep));
    const double ratio = distance(value_at(u, x), value_at(u, y)) / dp;
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  if (probe.gaps.empty())
    return rep;

  const SpacetimePoint top{probe.x, probe.s};
  if (!in_half_cylinder(top))
    throw GeometryError("probe point outside Q_{1/2}");
  const auto u0 = value_at(u, top);
  double scale = 0.0;
  for (double v : u0)
    scale = std::max(scale, std::abs(v));
  std::vector<double> lg, li;
  double largest = 0.0;
  for (double gap : probe.gaps) {
    if (!(gap > 0.0))
      throw ParameterError("time gaps must be positive");
    if (std::sqrt(gap) < min_sep * (1.0 - 1e-12))
      throw ResolutionError(fmt::format("time gap {} is below {}", gap, min_sep * min_sep));
    const SpacetimePoint low{probe.x, probe.s - gap};
    if (!in_half_cylinder(low))
      throw GeometryError("probe gap leaves Q_{1/2}");
    const double inc = distance(u0, value_at(u, low));
    largest = std::max(largest, inc);
    if (inc > 0.0) {
      lg.push_back(std::log(gap));
      li.push_back(std::log(inc));
    }
  }
  if (largest <= 1e-13 * (1.0 + scale)) {
    rep.is_static = true;
    return rep;
  }
  if (lg.size() < 2)
    throw ParameterError("fewer than two non-zero time increments");
  const double k = static_cast<double>(lg.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lg.size(); ++i) {
    sx += lg[i];
    sy += li[i];
    sxx += lg[i] * lg[i];
    sxy += lg[i] * li[i];
  }
  const double den = k * sxx - sx * sx;
  if (den <= 0.0)
    throw ParameterError("time gaps must not all coincide");
  rep.time_exponent = (k * sxy - sx * sy) / den;
  return rep;
}

} // namespace translab
