#include "translab/elliptic.hpp"
#include "translab/error.hpp"
#include "translab/oracle.hpp"
#include "translab/parabolic.hpp"
#include "translab/regularity.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace translab;

namespace {

constexpr double pi = std::numbers::pi;
// pinned from the first verified run (128 cells, z = (0.5, 0), r = 1/4)
constexpr double kDiskEnergyRatio = 0.23074333343;

DiscreteField interp(const Grid& g, const std::function<double(const Point&)>& f)
{
  return DiscreteField::interpolate(g, 1, [&](const Point& x, std::span<double> out) { out[0] = f(x); });
}

DiscreteField interp(const Grid& g, const oracle::FieldOracle& o, double t = 0.0)
{
  return DiscreteField::interpolate(g, o.m, [&](const Point& x, std::span<double> out) {
    const auto v = o.value(x, t);
    std::copy(v.begin(), v.end(), out.begin());
  });
}

VectorField trace_of(const oracle::FieldOracle& o)
{
  return [o](const Point& x, double t, std::span<double> out) {
    const auto v = o.value(x, t);
    std::copy(v.begin(), v.end(), out.begin());
  };
}

VerifiedProblem flat_problem()
{
  return verify(TransmissionProblem(CoefficientTensor::identity(2, 1),
                                    CoefficientTensor::identity(2, 1, 4.0, 0.25),
                                    IndicatorDomain::half_space({0, 1, 0}, 0.0),
                                    trace_of(oracle::flat_interface_oracle(1.0, 4.0))),
                64);
}

VerifiedProblem disk_problem()
{
  return verify(TransmissionProblem(CoefficientTensor::identity(2, 1),
                                    CoefficientTensor::identity(2, 1, 2.0, 0.5), IndicatorDomain::ball({0, 0, 0}, 0.5),
                                    trace_of(oracle::disk_inclusion_oracle(2.0, 0.5))),
                64);
}

VerifiedProblem with_domain(IndicatorDomain d)
{
  const auto id = CoefficientTensor::identity(2, 1);
  return verify(TransmissionProblem(id, id, std::move(d), [](const Point&, double, std::span<double> o) { o[0] = 0; }),
                16);
}

CgOptions tight()
{
  CgOptions c;
  c.tol = 1e-12;
  return c;
}

} // namespace

TEST_CASE("affine fit reproduces affine fields")
{
  const Grid g(2, 128);
  const auto u = DiscreteField::interpolate(g, 2, [](const Point& x, std::span<double> out) {
    out[0] = 0.3 * x[0] - 1.2 * x[1] + 0.7;
    out[1] = -2.0 * x[0] + 0.5 * x[1];
  });
  for (const Point z : {Point{0, 0, 0}, Point{0.137, -0.291, 0}, Point{-0.3, 0.13, 0}}) {
    for (double r : {0.5, 0.2, 0.0625}) {
      const auto fit = affine_fit(u, z, r);
      CHECK(fit.gradient[0] == doctest::Approx(0.3));
      CHECK(fit.gradient[1] == doctest::Approx(-1.2));
      CHECK(fit.gradient[2] == doctest::Approx(-2.0));
      CHECK(fit.gradient[3] == doctest::Approx(0.5));
      CHECK(std::abs(fit.value[0] - (0.3 * z[0] - 1.2 * z[1] + 0.7)) < 1e-12);
      CHECK(std::abs(fit.value[1] - (-2.0 * z[0] + 0.5 * z[1])) < 1e-12);
      CHECK(fit.residual <= 1e-18);
      CHECK(fit.volume == doctest::Approx(pi * r * r).epsilon(1e-3));
      const Point y = z + Point{0.01, 0.02, 0};
      CHECK(fit(y)[0] == doctest::Approx(0.3 * y[0] - 1.2 * y[1] + 0.7));
    }
  }
  const auto prof = bmo_profile(u, {0.1, 0.1, 0}, 0.5, 3);
  REQUIRE(prof.size() == 4);
  for (const auto& f : prof)
    CHECK(f.residual <= 1e-18);
}

TEST_CASE("symmetric quadratic has zero fitted gradient")
{
  const Grid g(2, 128);
  const auto u = interp(g, [](const Point& x) { return 0.5 * dot(x, x); });
  for (double r : {0.5, 0.25, 0.1}) {
    const auto fit = affine_fit(u, {0, 0, 0}, r);
    CHECK(std::abs(fit.gradient[0]) < 1e-13);
    CHECK(std::abs(fit.gradient[1]) < 1e-13);
  }
}

TEST_CASE("disk residual matches a polar integral of the closed form")
{
  const auto ora = oracle::disk_inclusion_oracle(2.0, 0.5);
  const Point z{0.5, 0.0, 0};
  const double r = 0.25;
  // polar midpoint rule, independent of the lattice code
  const int nr = 400, nt = 1200;
  double vol = 0, gx = 0, gy = 0;
  std::vector<std::array<double, 3>> pts;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      const double rho = (i + 0.5) * r / nr;
      const double th = (j + 0.5) * 2 * pi / nt;
      const double w = rho * (r / nr) * (2 * pi / nt);
      const auto gr = ora.gradient(z + Point{rho * std::cos(th), rho * std::sin(th), 0});
      pts.push_back({gr[0], gr[1], w});
      vol += w;
      gx += w * gr[0];
      gy += w * gr[1];
    }
  gx /= vol;
  gy /= vol;
  double res = 0.0;
  for (const auto& p : pts)
    res += p[2] * ((p[0] - gx) * (p[0] - gx) + (p[1] - gy) * (p[1] - gy));
  res /= r * r;

  const auto fit = affine_fit(interp(Grid(2, 256), ora), z, r);
  CHECK(fit.residual == doctest::Approx(res).epsilon(0.05));
  CHECK(fit.gradient[0] == doctest::Approx(gx).epsilon(0.01));
}

TEST_CASE("flat interface BMO constant is the jump variance")
{
  const Grid g(2, 256);
  const auto u = interp(g, oracle::flat_interface_oracle(1.0, 4.0));
  // gradient (0,1) below, (0,1/4) above: |grad u - mean|^2 = (3/8)^2 on B_r
  const double expected = pi * 0.375 * 0.375;
  for (const Point z : {Point{0, 0, 0}, Point{0.25, 0, 0}}) {
    const auto prof = bmo_profile(u, z, 0.5, 4);
    for (const auto& f : prof) {
      CHECK(f.residual == doctest::Approx(expected).epsilon(5e-3));
      CHECK(f.gradient[1] == doctest::Approx(0.625).epsilon(1e-3));
    }
  }
}

TEST_CASE("smooth fields have decaying BMO constants")
{
  const Grid g(2, 256);
  const auto u = interp(g, [](const Point& x) { return std::exp(x[0]) * std::sin(x[1] + 0.3); });
  const auto prof = bmo_profile(u, {0.1, 0.2, 0}, 0.25, 3);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(prof.size());
  for (const auto& f : prof) {
    const double lx = std::log(f.r), ly = std::log(f.residual);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  CHECK(slope >= 1.5);
}

TEST_CASE("dyadic gradient drift is controlled by the BMO columns")
{
  const Grid g(2, 128);
  const auto u = solve_transmission(disk_problem(), g, tight()).field;
  for (const Point z : {Point{0.5, 0, 0}, Point{0, 0.3, 0}, Point{-0.2, -0.2, 0}}) {
    const auto prof = bmo_profile(u, z, 0.4, 2);
    for (std::size_t k = 1; k < prof.size(); ++k) {
      double d = 0.0;
      for (std::size_t q = 0; q < prof[k].gradient.size(); ++q)
        d += std::pow(prof[k].gradient[q] - prof[k - 1].gradient[q], 2);
      CHECK(d <= 8.0 * (prof[k].residual + prof[k - 1].residual) + 1e-14);
    }
  }
}

TEST_CASE("BMO boundedness across five dyadic scales")
{
  const Grid g(2, 512);
  const auto u = interp(g, oracle::flat_interface_oracle(1.0, 4.0));
  for (const Point z : {Point{0, 0, 0}, Point{0.2, 0.1, 0}, Point{-0.3, -0.05, 0}}) {
    const auto prof = bmo_profile(u, z, 0.5, 5);
    for (const auto& f : prof)
      CHECK(f.residual <= 4.0 * prof.front().residual + 1e-6);
  }
}

TEST_CASE("rescaling covariance of analytic fits")
{
  const auto ora = oracle::disk_inclusion_oracle(3.0, 0.3);
  const Point c{0.2, 0.1, 0};
  const PointSampler u = [&](const Point& x, std::span<double> v, std::span<double> g) {
    ora.eval(x - c, 0.0, v, g);
  };
  for (double r : {0.5, 0.25, 0.125}) {
    const PointSampler ur = [&, r](const Point& x, std::span<double> v, std::span<double> g) {
      ora.eval(r * x - c, 0.0, v, g);
      v[0] /= r;
    };
    const auto a = affine_fit(u, 2, 1, {0, 0, 0}, r, 64);
    const auto b = affine_fit(ur, 2, 1, {0, 0, 0}, 1.0, 64);
    CHECK(std::abs(a.gradient[0] - b.gradient[0]) < 1e-12);
    CHECK(std::abs(a.gradient[1] - b.gradient[1]) < 1e-12);
    CHECK(a.residual == doctest::Approx(b.residual).epsilon(1e-10));
  }
}

TEST_CASE("fit preconditions")
{
  const Grid g(2, 32);
  const auto u = interp(g, [](const Point& x) { return x[0]; });
  CHECK_THROWS_AS(affine_fit(u, {0, 0, 0}, 0.1), ResolutionError);
  CHECK_THROWS_AS(affine_fit(u, {0.7, 0, 0}, 0.5), GeometryError);
  CHECK_THROWS_AS(affine_fit(u, {0, 0, 0}, -0.5), ParameterError);
  AnalysisOptions loose;
  loose.min_cells_per_radius = 2;
  CHECK_NOTHROW(affine_fit(u, {0, 0, 0}, 0.15, loose));
}

TEST_CASE("density decay reports")
{
  const Grid g(2, 128);
  const auto steep = interp(g, [](const Point& x) { return 30.0 * x[0]; });
  AnalysisOptions opt;
  opt.modulus = Modulus::power(1.0);
  const std::vector<double> scales{0.4, 0.2, 0.1};

  SUBCASE("empty inclusion")
  {
    const auto rep = density_decay_report(with_domain(IndicatorDomain::empty()), steep, {0, 0, 0}, scales, 10.0, opt);
    for (const auto& row : rep.rows) {
      CHECK(*row.density == 0.0);
      CHECK(*row.density_rhs == 0.0);
      CHECK(*row.slack == 0.0);
    }
    CHECK(rep.required_constant() == 0.0);
    CHECK(rep.tag == CaseTag::case2);
  }
  SUBCASE("half space through the center")
  {
    const Point z{0.1, -0.2, 0};
    const auto rep =
        density_decay_report(with_domain(IndicatorDomain::half_space({0, 1, 0}, z[1])), steep, z, scales, 10.0, opt);
    double worst = 0.0;
    for (const auto& row : rep.rows) {
      CHECK(std::abs(*row.density - pi / 2) < 1e-3);
      CHECK(std::abs(*row.density_rhs - pi / 8) < 1e-3);
      const double slack = (pi / 2) * (1 - 0.25) / std::pow(row.r, 6);
      CHECK(*row.slack == doctest::Approx(slack).epsilon(1e-3));
      worst = std::max(worst, *row.slack);
    }
    CHECK(rep.required_constant() == doctest::Approx(worst));
  }
  SUBCASE("hypothesis not met")
  {
    const auto flat = interp(g, oracle::flat_interface_oracle(1.0, 4.0));
    const auto rep = density_decay_report(flat_problem(), flat, {0, 0, 0}, scales, 10.0, opt);
    for (const auto& row : rep.rows) {
      CHECK(row.density.has_value());
      CHECK_FALSE(row.slack.has_value());
    }
    CHECK(rep.tag == CaseTag::case1);
  }
  SUBCASE("doubling identity through the report")
  {
    const auto cusp = with_domain(IndicatorDomain::cusp(0.5, {0, 0, 0}, 1));
    AnalysisOptions o = opt;
    o.density_resolution = 512;
    const auto rep = density_decay_report(cusp, steep, {0, -0.1, 0}, {0.4, 0.2, 0.1, 0.05}, 10.0, o);
    for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
      const double half = rescaled_density(cusp->domain(), 2, {0, -0.1, 0}, rep.rows[k].r, 1024, 0.5);
      CHECK(std::abs(*rep.rows[k + 1].density - 4.0 * half) < 1e-3);
      CHECK(*rep.rows[k].density >= 0.0);
      CHECK(*rep.rows[k].density <= pi + 1e-3);
    }
  }
  CHECK_THROWS_AS(density_decay_report(flat_problem(), steep, {0, 0, 0}, scales, 0.0), ParameterError);
  CHECK_THROWS_AS(density_decay_report(flat_problem(), steep, {0, 0, 0}, {0.1, 0.2}, 1.0), ParameterError);
}

TEST_CASE("analysis without a problem leaves the density columns empty")
{
  const Grid g(2, 64);
  const auto u = interp(g, [](const Point& x) { return x[0]; });
  const auto rep = analyze_center(nullptr, u, {0, 0, 0}, {0.5, 0.25, 0.125, 0.0625, 0.03125}, 10.0);
  REQUIRE(rep.rows.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(rep.rows[k].grad_l_norm.has_value() == (k < 3));
    CHECK_FALSE(rep.rows[k].density.has_value());
  }
  CHECK(rep.tag == CaseTag::case1);
}

TEST_CASE("Lipschitz ratio")
{
  const Grid g(2, 256);
  SUBCASE("flat interface closed form")
  {
    const auto u = interp(g, oracle::flat_interface_oracle(1.0, 4.0));
    const auto l = lipschitz_ratio(flat_problem(), u);
    CHECK(l.sup_grad == doctest::Approx(1.0));
    CHECK(l.norm_lip_d == doctest::Approx(0.25));
    const double l2 = std::sqrt((pi / 8) * (1 + 1.0 / 16));
    CHECK(l.norm_l2 == doctest::Approx(l2).epsilon(1e-3));
    CHECK(l.ratio == doctest::Approx(1.0 / (l2 + 0.25)).epsilon(1e-3));
    CHECK(default_threshold(l) == doctest::Approx(10 * (l.norm_l2 + 0.25)));
  }
  SUBCASE("linear field")
  {
    const auto u = interp(g, [](const Point& x) { return x[0]; });
    const auto l = lipschitz_ratio(with_domain(IndicatorDomain::ball({0.3, 0, 0}, 0.2)), u);
    CHECK(l.sup_grad == doctest::Approx(1.0));
    CHECK(l.ratio <= 1.0);
  }
  SUBCASE("zero field")
  {
    const auto l = lipschitz_ratio(flat_problem(), DiscreteField(g, 1));
    CHECK(l.ratio == 0.0);
  }
}

TEST_CASE("dichotomy")
{
  const Grid g(2, 128);
  const auto slow = interp(g, [](const Point& x) { return x[0]; });
  const auto fast = interp(g, [](const Point& x) { return 30.0 * x[1]; });
  CHECK(dichotomy_classify(slow, {0, 0, 0}, 10.0, 0.25, 2) == CaseTag::case1);
  CHECK(dichotomy_classify(fast, {0, 0, 0}, 10.0, 0.25, 2) == CaseTag::case2);
  CHECK(dichotomy_classify(fast, {0, 0, 0}, 10.0, 0.25, 1) == CaseTag::undetermined);
  CHECK(dichotomy_classify(fast, {0, 0, 0}, 10.0, 0.125, 2) == CaseTag::undetermined);

  const auto flat = interp(g, oracle::flat_interface_oracle(1.0, 4.0));
  const double m = default_threshold(lipschitz_ratio(flat_problem(), flat));
  for (const Point z : {Point{0, 0, 0}, Point{0.3, 0.2, 0}, Point{-0.5, -0.1, 0}})
    CHECK(dichotomy_classify(flat, z, m, 0.25, 2) == CaseTag::case1);
  CHECK(case_name(CaseTag::case1) == "Case1");
  CHECK(case_name(CaseTag::case2) == "Case2");
  CHECK(case_name(CaseTag::undetermined) == "undetermined");
}

TEST_CASE("frozen comparison")
{
  const Grid g(2, 128);
  SUBCASE("affine fields give v = 0")
  {
    const auto u = interp(g, [](const Point& x) { return 2 * x[0] - x[1]; });
    const auto fc = frozen_comparison(flat_problem(), u, {0.1, 0.1, 0}, 0.25);
    CHECK(fc.sup_grad_inner <= 1e-9);
    CHECK(fc.energy_ratio == 0.0);
  }
  SUBCASE("smooth coefficients")
  {
    const auto a = CoefficientTensor::scaled_identity(
        2, 1, [](const Point& x) { return 1.0 + 0.25 * x[0]; }, 0.5, DiniBound{Modulus::power(1.0, 0.25), 1.0},
        "1+x/4");
    const auto p = verify(TransmissionProblem(a, a, IndicatorDomain::empty(),
                                              [](const Point& x, double, std::span<double> o) {
                                                o[0] = std::sin(x[0]) * std::cosh(x[1]);
                                              }),
                          256);
    const auto u = solve_transmission(p, g, tight()).field;
    const auto fc = frozen_comparison(p, u, {0.1, -0.1, 0}, 0.25);
    CHECK(fc.energy_ratio <= 1.1);
    CHECK(fc.energy_ratio > 0.5);
  }
  SUBCASE("disk interface, regression anchor")
  {
    const auto u = solve_transmission(disk_problem(), g, tight()).field;
    const auto fc = frozen_comparison(disk_problem(), u, {0.5, 0, 0}, 0.25);
    CHECK(std::isfinite(fc.energy_ratio));
    CHECK(fc.energy_ratio == doctest::Approx(kDiskEnergyRatio).epsilon(1e-6));
  }
  const auto u = interp(g, [](const Point& x) { return x[0]; });
  CHECK_THROWS_AS(frozen_comparison(flat_problem(), u, {0, 0, 0}, 0.1), ResolutionError);
  CHECK_THROWS_AS(frozen_comparison(flat_problem(), u, {0.8, 0, 0}, 0.25), GeometryError);
}

// --- parabolic ---------------------------------------------------------

namespace {

FieldSeries series_of(const Grid& g, double dt, const std::function<double(const Point&, double)>& f)
{
  FieldSeries s(g, 1);
  const int steps = static_cast<int>(std::lround(1.0 / dt));
  for (int k = 0; k <= steps; ++k) {
    const double t = -1.0 + k * dt;
    std::vector<double> v(g.node_count());
    for (Index n = 0; n < g.node_count(); ++n)
      v[n] = f(g.node_position(n), t);
    s.push(t, std::move(v));
  }
  return s;
}

} // namespace

TEST_CASE("parabolic affine fit")
{
  const Grid g(2, 64);
  const double dt = 1.0 / 256;
  SUBCASE("stationary affine")
  {
    const auto s = series_of(g, dt, [](const Point& x, double) { return 3 * x[0] - x[1]; });
    const auto fit = parabolic_affine_fit(s, {0.1, 0, 0}, -0.2, 0.25);
    CHECK(fit.gradient[0] == doctest::Approx(3.0));
    CHECK(fit.gradient[1] == doctest::Approx(-1.0));
    CHECK(fit.sup_t_residual <= 1e-15);
    CHECK(fit.levels == 16);
  }
  SUBCASE("x1 + t")
  {
    const auto s = series_of(g, dt, [](const Point& x, double t) { return x[0] + t; });
    for (double r : {0.5, 0.25}) {
      const auto fit = parabolic_affine_fit(s, {0, 0, 0}, 0.0, r);
      CHECK(fit.gradient[0] == doctest::Approx(1.0));
      CHECK(std::abs(fit.gradient[1]) < 1e-12);
      CHECK(fit.sup_t_residual == doctest::Approx(pi * r * r).epsilon(2e-3));
      CHECK(fit.log_bound_ratio == doctest::Approx(1.0 / std::abs(std::log(r))));
    }
  }
  SUBCASE("eigenmode residual shrinks with r")
  {
    const auto ora = oracle::eigenmode_oracle(2, {1, 1}, -1.0);
    const auto s = series_of(g, dt, [&](const Point& x, double t) { return ora.value(x, t)[0]; });
    double prev = INFINITY;
    for (double r : {0.5, 0.25, 0.125}) {
      const auto fit = parabolic_affine_fit(s, {0.2, 0.1, 0}, -0.3, r);
      CHECK(std::isfinite(fit.sup_t_residual));
      CHECK(fit.sup_t_residual < prev);
      prev = fit.sup_t_residual;
    }
  }
  const auto s = series_of(g, dt, [](const Point& x, double) { return x[0]; });
  CHECK_THROWS_AS(parabolic_affine_fit(s, {0, 0, 0}, -0.9, 0.5), DomainError);
  CHECK_THROWS_AS(parabolic_affine_fit(s, {0, 0, 0}, 0.1, 0.25), DomainError);
  CHECK_THROWS_AS(parabolic_affine_fit(s, {0, 0, 0}, 0.0, 0.03), ResolutionError);
  const auto coarse_t = series_of(g, 0.125, [](const Point& x, double) { return x[0]; });
  CHECK_THROWS_AS(parabolic_affine_fit(coarse_t, {0, 0, 0}, 0.0, 0.5), ResolutionError);
}

TEST_CASE("parabolic density decay")
{
  const Grid g(2, 64);
  const auto s = series_of(g, 1.0 / 256, [](const Point& x, double) { return 30 * x[0]; });
  AnalysisOptions opt;
  opt.modulus = Modulus::power(1.0);
  const std::vector<double> scales{0.5, 0.25};
  {
    const auto rep = parabolic_density_decay(with_domain(IndicatorDomain::empty()), s, {0, 0, 0}, 0.0, scales, 10, opt);
    for (const auto& row : rep.rows) {
      CHECK(*row.density == 0.0);
      CHECK(*row.slack == 0.0);
    }
    CHECK(rep.s.has_value());
  }
  {
    const auto rep =
        parabolic_density_decay(with_domain(IndicatorDomain::half_space({0, 1, 0}, 0.0)), s, {0, 0, 0}, 0.0, scales, 10, opt);
    for (const auto& row : rep.rows) {
      CHECK(std::abs(*row.density - pi / 2) < 1e-2);
      CHECK(*row.density_rhs == doctest::Approx(*row.density / 16));
      CHECK(row.sup_t_residual.has_value());
    }
  }
  {
    // t < -3/16 at r = 1/2 covers the lower quarter of the unit time interval
    opt.parabolic_density_resolution = 256;
    const auto slab = with_domain(IndicatorDomain::time_slab(-0.1875));
    const double d = parabolic_rescaled_density(slab->domain(), 2, {0, 0, 0}, 0.0, 0.5, 256);
    const double full = parabolic_rescaled_density(IndicatorDomain::complement(IndicatorDomain::empty()), 2,
                                                   {0, 0, 0}, 0.0, 0.5, 256);
    CHECK(d == doctest::Approx(full / 4));
    CHECK(std::abs(d - pi / 4) < 1e-3);
    const auto rep = parabolic_density_decay(slab, s, {0, 0, 0}, 0.0, {0.5}, 10, opt);
    CHECK(*rep.rows[0].density == doctest::Approx(d));
  }
}

TEST_CASE("time Hoelder exponent")
{
  const Grid g(2, 64);
  const double dt = 1.0 / 4096;
  std::vector<double> gaps;
  for (int k = 3; k <= 6; ++k)
    gaps.push_back(std::ldexp(1.0, -k));
  const TimeProbe probe{{0.1, 0.1, 0}, 0.0, gaps};
  std::vector<std::pair<SpacetimePoint, SpacetimePoint>> pairs;
  for (double gap : gaps)
    pairs.push_back({{{0.1, 0.1, 0}, 0.0}, {{0.1, 0.1, 0}, -gap}});
  pairs.push_back({{{-0.2, 0.1, 0}, -0.1}, {{0.2, 0.1, 0}, -0.1}});

  SUBCASE("static field")
  {
    const auto s = series_of(g, dt, [](const Point& x, double) { return x[0]; });
    const auto rep = holder_time_exponent(s, pairs, probe);
    CHECK(rep.is_static);
    CHECK_FALSE(rep.time_exponent.has_value());
    CHECK(rep.max_ratio <= 1.0 + 1e-12);
  }
  SUBCASE("x1 + t")
  {
    const auto s = series_of(g, dt, [](const Point& x, double t) { return x[0] + t; });
    const auto rep = holder_time_exponent(s, pairs, probe);
    for (std::size_t k = 0; k < gaps.size(); ++k)
      CHECK(rep.ratios[k] == doctest::Approx(std::sqrt(gaps[k])));
    REQUIRE(rep.time_exponent.has_value());
    CHECK(*rep.time_exponent == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("eigenmode")
  {
    const auto ora = oracle::eigenmode_oracle(2, {1, 1}, -1.0);
    const auto s = series_of(g, dt, [&](const Point& x, double t) { return ora.value(x, t)[0]; });
    const auto rep = holder_time_exponent(s, {}, TimeProbe{{0.3, 0.2, 0}, -0.05, {0.015625, 0.0078125, 0.00390625}});
    REQUIRE(rep.time_exponent.has_value());
    CHECK(*rep.time_exponent >= 0.45);
    CHECK(*rep.time_exponent == doctest::Approx(1.0).epsilon(0.15));
  }
  const auto s = series_of(g, dt, [](const Point& x, double t) { return x[0] + t; });
  const SpacetimePoint o{{0, 0, 0}, -0.1};
  CHECK_THROWS_AS(holder_time_exponent(s, {{o, o}}, {}), ParameterError);
  CHECK_THROWS_AS(holder_time_exponent(s, {{o, {{0.01, 0, 0}, -0.1}}}, {}), ResolutionError);
  CHECK_THROWS_AS(holder_time_exponent(s, {{o, {{0.7, 0, 0}, -0.1}}}, {}), GeometryError);
  CHECK_THROWS_AS(holder_time_exponent(s, {}, {}), ParameterError);
  CHECK(parabolic_distance({{0, 0, 0}, 0}, {{0.3, 0.4, 0}, -0.25}) == doctest::Approx(std::sqrt(0.5)));
}
