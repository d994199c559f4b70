#include "translab/regularity.hpp"

#include "translab/error.hpp"
#include "translab/fem.hpp"
#include "regularity_detail.hpp"
#include "translab/sparse.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace translab {

namespace detail {

namespace {

constexpr double kGauss = 0.21132486540518711775; // (1 - 1/sqrt(3)) / 2

double box_distance(const Point& lo, double h, int n, const Point& z, bool farthest)
{
  double s = 0.0;
  for (int d = 0; d < n; ++d) {
    const double a = lo[d] - z[d];
    const double b = lo[d] + h - z[d];
    double t;
    if (farthest)
      t = std::max(std::abs(a), std::abs(b));
    else
      t = (a > 0.0) ? a : (b < 0.0 ? -b : 0.0);
    s += t * t;
  }
  return std::sqrt(s);
}

} // namespace

void for_each_ball_cell(const Lattice& lat, const Point& z, double r, int subsamples,
                        const std::function<void(const BallCell&)>& f)
{
  const int n = lat.n;
  std::array<int, kMaxDim> lo{0, 0, 0}, hi{0, 0, 0};
  for (int d = 0; d < n; ++d) {
    lo[d] = std::max(0, static_cast<int>(std::floor((z[d] - r - lat.origin[d]) / lat.h)));
    hi[d] = std::min(lat.cells - 1, static_cast<int>(std::floor((z[d] + r - lat.origin[d]) / lat.h)));
    if (hi[d] < lo[d])
      return;
  }
  const double vol = std::pow(lat.h, n);
  const int sub_total = static_cast<int>(std::pow(subsamples, n));
  BallCell cell;
  std::array<int, kMaxDim> idx = lo;
  for (;;) {
    Point o{0, 0, 0};
    for (int d = 0; d < n; ++d)
      o[d] = lat.origin[d] + idx[d] * lat.h;
    if (box_distance(o, lat.h, n, z, false) < r) {
      cell.origin = o;
      cell.points.clear();
      cell.weights.clear();
      if (box_distance(o, lat.h, n, z, true) <= r) {
        cell.full = true;
        cell.fraction = 1.0;
        for (int b = 0; b < (1 << n); ++b) {
          Point p{0, 0, 0};
          for (int d = 0; d < n; ++d)
            p[d] = o[d] + lat.h * (((b >> d) & 1) ? 1.0 - kGauss : kGauss);
          cell.points.push_back(p);
          cell.weights.push_back(vol / (1 << n));
        }
      } else {
        cell.full = false;
        const double hs = lat.h / subsamples;
        for (int k = 0; k < sub_total; ++k) {
          Point p{0, 0, 0};
          int rem = k;
          for (int d = 0; d < n; ++d) {
            p[d] = o[d] + (rem % subsamples + 0.5) * hs;
            rem /= subsamples;
          }
          if (norm(p - z) < r) {
            cell.points.push_back(p);
            cell.weights.push_back(vol / sub_total);
          }
        }
        cell.fraction = static_cast<double>(cell.points.size()) / sub_total;
      }
      if (!cell.points.empty()) {
        for (int d = 0; d < n; ++d)
          cell.center[d] = o[d] + 0.5 * lat.h;
        f(cell);
      }
    }
    int d = 0;
    for (; d < n; ++d) {
      if (++idx[d] <= hi[d])
        break;
      idx[d] = lo[d];
    }
    if (d == n)
      break;
  }
}

AffineFit fit_on_lattice(const PointSampler& u, const Lattice& lat, int m, const Point& z, double r,
                         int subsamples)
{
  const int n = lat.n;
  AffineFit fit;
  fit.z = z;
  fit.r = r;
  fit.n = n;
  fit.m = m;
  fit.value.assign(m, 0.0);
  fit.gradient.assign(static_cast<std::size_t>(m * n), 0.0);

  std::vector<BallCell> cells;
  for_each_ball_cell(lat, z, r, subsamples, [&](const BallCell& c) { cells.push_back(c); });
  if (cells.empty())
    throw ResolutionError(fmt::format("no cells meet the ball of radius {}", r));

  std::vector<double> val(m), grad(static_cast<std::size_t>(m * n));
  double frac_sum = 0.0;
  for (const auto& c : cells) {
    u(c.center, val, grad);
    for (std::size_t k = 0; k < grad.size(); ++k)
      fit.gradient[k] += c.fraction * grad[k];
    frac_sum += c.fraction;
  }
  for (auto& g : fit.gradient)
    g /= frac_sum;

  Point centroid{0, 0, 0};
  double volume = 0.0;
  std::vector<double> mean(m, 0.0);
  for (const auto& c : cells)
    for (std::size_t q = 0; q < c.points.size(); ++q) {
      const double w = c.weights[q];
      u(c.points[q], val, grad);
      for (int i = 0; i < m; ++i)
        mean[i] += w * val[i];
      centroid = centroid + w * c.points[q];
      volume += w;
      double e = 0.0;
      for (std::size_t k = 0; k < grad.size(); ++k)
        e += (grad[k] - fit.gradient[k]) * (grad[k] - fit.gradient[k]);
      fit.residual += w * e;
    }
  centroid = (1.0 / volume) * centroid;
  for (int i = 0; i < m; ++i) {
    double v = mean[i] / volume;
    for (int a = 0; a < n; ++a)
      v += fit.gradient[i * n + a] * (z[a] - centroid[a]);
    fit.value[i] = v;
  }
  fit.residual /= std::pow(r, n);
  fit.volume = volume;
  return fit;
}

Lattice grid_lattice(const Grid& g)
{
  return {g.n(), {-1.0, -1.0, -1.0}, g.h(), g.cells_per_side()};
}

PointSampler nodal_sampler(const Grid& g, int m, std::span<const double> values)
{
  return [&g, m, values](const Point& x, std::span<double> v, std::span<double> grad) {
    sample_nodal(g, m, values, x, v, grad);
  };
}

double frobenius(std::span<const double> a)
{
  double s = 0.0;
  for (double v : a)
    s += v * v;
  return std::sqrt(s);
}

void check_ball(int n, const Point& z, double r)
{
  if (!(r > 0.0))
    throw ParameterError(fmt::format("radius {} must be positive", r));
  (void)n;
  if (norm(z) + r > 1.0 + 1e-12)
    throw GeometryError(fmt::format("B_{}({}, {}, {}) is not contained in B_1", r, z[0], z[1], z[2]));
}

void check_radius(const Grid& g, double r, int cells)
{
  if (r < cells * g.h() * (1.0 - 1e-12))
    throw ResolutionError(fmt::format("radius {} is below {} cells of width {}", r, cells, g.h()));
}

Modulus slack_modulus(const VerifiedProblem& p, const AnalysisOptions& opt)
{
  if (opt.modulus)
    return *opt.modulus;
  if (p->a().dini())
    return p->a().dini()->modulus;
  return Modulus::power(1.0, 1.0);
}

CaseTag classify(const std::vector<double>& norms, double threshold)
{
  if (norms.size() < 3)
    return CaseTag::undetermined;
  const double lo = *std::min_element(norms.begin(), norms.end());
  return lo < 2.0 * threshold ? CaseTag::case1 : CaseTag::case2;
}

void check_scales(const std::vector<double>& scales)
{
  if (scales.empty())
    throw ParameterError("no scales given");
  for (std::size_t k = 1; k < scales.size(); ++k)
    if (!(scales[k] < scales[k - 1]))
      throw ParameterError("scales must be strictly decreasing");
}

} // namespace detail

using namespace detail;

double AffineFit::gradient_norm() const
{
  return frobenius(gradient);
}

std::vector<double> AffineFit::operator()(const Point& x) const
{
  std::vector<double> out = value;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < n; ++a)
      out[i] += gradient[i * n + a] * (x[a] - z[a]);
  return out;
}

AffineFit affine_fit(const DiscreteField& u, const Point& z, double r, const AnalysisOptions& opt)
{
  check_ball(u.grid().n(), z, r);
  check_radius(u.grid(), r, opt.min_cells_per_radius);
  return fit_on_lattice(nodal_sampler(u.grid(), u.m(), u.values()), grid_lattice(u.grid()), u.m(), z, r,
                        opt.subsamples);
}

AffineFit affine_fit(const PointSampler& u, int n, int m, const Point& z, double r, int cells,
                     const AnalysisOptions& opt)
{
  if (cells < 2)
    throw ResolutionError("analytic fit needs at least 2 cells across");
  if (!(r > 0.0))
    throw ParameterError(fmt::format("radius {} must be positive", r));
  Point origin{0, 0, 0};
  for (int d = 0; d < n; ++d)
    origin[d] = z[d] - r;
  return fit_on_lattice(u, Lattice{n, origin, 2.0 * r / cells, cells}, m, z, r, opt.subsamples);
}

std::vector<AffineFit> bmo_profile(const DiscreteField& u, const Point& z, double r0, int k_max,
                                   const AnalysisOptions& opt)
{
  if (k_max < 0)
    throw ParameterError("k_max must be non-negative");
  check_radius(u.grid(), r0 * std::ldexp(1.0, -k_max), opt.min_cells_per_radius);
  std::vector<AffineFit> out;
  for (int k = 0; k <= k_max; ++k)
    out.push_back(affine_fit(u, z, r0 * std::ldexp(1.0, -k), opt));
  return out;
}

std::string_view case_name(CaseTag c)
{
  switch (c) {
  case CaseTag::case1: return "Case1";
  case CaseTag::case2: return "Case2";
  default: return "undetermined";
  }
}

double DyadicReport::required_constant() const
{
  double c = 0.0;
  for (const auto& row : rows)
    if (row.slack)
      c = std::max(c, *row.slack);
  return c;
}

namespace {

int density_resolution(int n, const AnalysisOptions& opt)
{
  if (opt.density_resolution > 0)
    return opt.density_resolution;
  return n == 2 ? 512 : 64;
}

} // namespace

DyadicReport analyze_center(const VerifiedProblem* p, const DiscreteField& u, const Point& z,
                            const std::vector<double>& scales, double threshold, const AnalysisOptions& opt)
{
  check_scales(scales);
  const int n = u.grid().n();
  check_ball(n, z, scales.front());
  DyadicReport rep;
  rep.n = n;
  rep.z = z;
  rep.threshold = threshold;
  std::vector<double> norms;
  const int res = density_resolution(n, opt);
  for (double r : scales) {
    DyadicRow row;
    row.r = r;
    try {
      const auto fit = affine_fit(u, z, r, opt);
      row.grad_l_norm = fit.gradient_norm();
      row.bmo_c = fit.residual;
      norms.push_back(*row.grad_l_norm);
    } catch (const ResolutionError&) {
    }
    if (p) {
      const auto& d = (*p)->domain();
      row.density = rescaled_density(d, n, z, r, res);
      row.density_rhs = *row.density / std::ldexp(1.0, n);
      if (row.grad_l_norm && *row.grad_l_norm >= threshold) {
        const double lhs = rescaled_density(d, n, z, 0.5 * r, res);
        const double w = slack_modulus(*p, opt)(r);
        row.slack = (lhs - *row.density_rhs) / std::pow(w, 3 * n);
      }
    }
    rep.rows.push_back(row);
  }
  rep.tag = classify(norms, threshold);
  return rep;
}

DyadicReport density_decay_report(const VerifiedProblem& p, const DiscreteField& u, const Point& z,
                                  const std::vector<double>& scales, double threshold, const AnalysisOptions& opt)
{
  if (!(threshold > 0.0))
    throw ParameterError(fmt::format("threshold M = {} must be positive", threshold));
  return analyze_center(&p, u, z, scales, threshold, opt);
}

double ball_l2_norm(const DiscreteField& u, const AnalysisOptions& opt)
{
  const Grid& g = u.grid();
  const int m = u.m();
  double sq = 0.0;
  std::vector<double> val(m);
  for_each_ball_cell(grid_lattice(g), Point{0, 0, 0}, 1.0, opt.subsamples, [&](const BallCell& c) {
    for (std::size_t q = 0; q < c.points.size(); ++q) {
      sample_nodal(g, m, u.values(), c.points[q], val, {});
      for (int i = 0; i < m; ++i)
        sq += c.weights[q] * val[i] * val[i];
    }
  });
  return std::sqrt(sq);
}

LipschitzRatio lipschitz_ratio(const VerifiedProblem& p, const DiscreteField& u, const AnalysisOptions& opt)
{
  const Grid& g = u.grid();
  const int n = g.n();
  const int m = u.m();
  LipschitzRatio out;
  std::vector<double> grad(static_cast<std::size_t>(m * n));
  const auto& d = p->domain();
  for (Index c = 0; c < g.cell_count(); ++c) {
    const Point center = g.cell_center(c);
    const bool inner = norm(center) < 0.5;
    bool in_d = true;
    for (int b = 0; b < g.corners() && in_d; ++b) {
      const Point x = g.node_position(g.cell_corner(c, b));
      in_d = norm(x) <= 1.0 && d.contains(x, opt.t);
    }
    if (!inner && !in_d)
      continue;
    u.cell_gradient(c, grad);
    const double a = frobenius(grad);
    if (inner)
      out.sup_grad = std::max(out.sup_grad, a);
    if (in_d)
      out.norm_lip_d = std::max(out.norm_lip_d, a);
  }
  out.norm_l2 = ball_l2_norm(u, opt);
  const double den = out.norm_l2 + out.norm_lip_d;
  out.ratio = den > 0.0 ? out.sup_grad / den : 0.0;
  return out;
}

CaseTag dichotomy_classify(const DiscreteField& u, const Point& z, double threshold, double r0, int k_max,
                           const AnalysisOptions& opt)
{
  std::vector<double> norms;
  for (int k = 0; k <= k_max; ++k) {
    try {
      norms.push_back(affine_fit(u, z, r0 * std::ldexp(1.0, -k), opt).gradient_norm());
    } catch (const ResolutionError&) {
    } catch (const GeometryError&) {
    }
  }
  return classify(norms, threshold);
}

double default_threshold(const LipschitzRatio& l)
{
  return 10.0 * (l.norm_l2 + l.norm_lip_d);
}

FrozenComparison frozen_comparison(const VerifiedProblem& p, const DiscreteField& u, const Point& z, double r,
                                   const AnalysisOptions& opt)
{
  const Grid& g = u.grid();
  const int n = g.n();
  const int m = u.m();
  check_ball(n, z, r);
  check_radius(g, r, 16);
  AnalysisOptions fit_opt = opt;
  fit_opt.min_cells_per_radius = std::min(opt.min_cells_per_radius, 16);
  const AffineFit ell = affine_fit(u, z, r, fit_opt);

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.cell_count()), 0);
  std::vector<std::uint8_t> touched(static_cast<std::size_t>(g.node_count()), 0);
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(g.node_count()), 0);
  for (Index c = 0; c < g.cell_count(); ++c) {
    bool in = true;
    for (int b = 0; b < g.corners() && in; ++b)
      in = norm(g.node_position(g.cell_corner(c, b)) - z) <= r * (1.0 + 1e-12);
    mask[c] = in;
    for (int b = 0; b < g.corners(); ++b)
      (in ? touched : outside)[g.cell_corner(c, b)] = 1;
  }

  const std::vector<double> frozen = p->a().at(z, opt.t);
  const int order = n * m;
  std::vector<double> identity(static_cast<std::size_t>(order * order), 0.0);
  for (int k = 0; k < order; ++k)
    identity[k * order + k] = 1.0;

  CsrMatrix k = q1_pattern(g, m);
  CsrMatrix k_plain = k;
  add_stiffness(k, g, m, [&](const Point&, std::span<double> out) { std::copy(frozen.begin(), frozen.end(), out.begin()); },
                mask);
  add_stiffness(k_plain, g, m,
                [&](const Point&, std::span<double> out) { std::copy(identity.begin(), identity.end(), out.begin()); },
                mask);

  const std::size_t dofs = static_cast<std::size_t>(g.node_count() * m);
  std::vector<std::uint8_t> fixed(dofs, 1);
  std::vector<double> w(dofs, 0.0);
  std::size_t free_count = 0;
  for (Index node = 0; node < g.node_count(); ++node) {
    if (!touched[node])
      continue;
    const auto l = ell(g.node_position(node));
    for (int i = 0; i < m; ++i) {
      w[node * m + i] = u.value(node, i) - l[i];
      if (!outside[node]) {
        fixed[node * m + i] = 0;
        ++free_count;
      }
    }
  }
  if (free_count == 0)
    throw ResolutionError(fmt::format("no interior nodes in the discrete ball of radius {}", r));

  std::vector<double> rhs(dofs, 0.0);
  apply_dirichlet(k, rhs, fixed, w);
  CgOptions cg;
  cg.tol = 1e-12;
  auto sol = solve_cg(k, rhs, w, cg);
  for (std::size_t i = 0; i < dofs; ++i)
    if (fixed[i])
      sol.x[i] = w[i];

  FrozenComparison out{DiscreteField(g, m, std::move(sol.x)), 0.0, 0.0};
  std::vector<double> grad(static_cast<std::size_t>(m * n));
  for (Index c = 0; c < g.cell_count(); ++c) {
    if (!mask[c] || norm(g.cell_center(c) - z) >= 2.0 * r / 3.0)
      continue;
    out.v.cell_gradient(c, grad);
    out.sup_grad_inner = std::max(out.sup_grad_inner, frobenius(grad));
  }
  // u - l at rounding level counts as zero energy
  const double ew = quadratic_form(k_plain, w);
  const double eu = quadratic_form(k_plain, u.values());
  out.energy_ratio = ew > 1e-20 * eu && ew > 1e-300 ? quadratic_form(k_plain, out.v.values()) / ew : 0.0;
  return out;
}

} // namespace translab
