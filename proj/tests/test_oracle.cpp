#include "translab/elliptic.hpp"
#include "translab/error.hpp"
#include "translab/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace translab;
using namespace translab::oracle;

TEST_CASE("flat interface")
{
  const auto same = flat_interface(2.0, 2.0, {0.3, 0.7, 0});
  CHECK(same.u == doctest::Approx(0.7));
  const auto above = flat_interface(1.0, 4.0, {0.3, 0.5, 0});
  CHECK(above.u == doctest::Approx(0.125));
  CHECK(above.grad[0] == 0.0);
  CHECK(above.grad[1] == doctest::Approx(0.25));
  const auto below = flat_interface(2.0, 1.0, {0.0, -0.2, 0});
  CHECK(below.u == doctest::Approx(-0.2));
  CHECK(below.grad[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(flat_interface(0.0, 1.0, {0, 0, 0}), ParameterError);
  CHECK_THROWS_AS(flat_interface(1.0, -1.0, {0, 0, 0}), ParameterError);
}

TEST_CASE("disk inclusion")
{
  for (const Point x : {Point{0.1, 0.2, 0}, Point{0.9, -0.3, 0}})
    CHECK(disk_inclusion(1.0, 0.5, x).u == doctest::Approx(x[0]));
  const auto in = disk_inclusion(2.0, 0.5, {0.1, 0, 0});
  CHECK(in.u == doctest::Approx(0.2 / 3.0));
  CHECK(in.grad[0] == doctest::Approx(2.0 / 3.0));
  CHECK(in.grad[1] == 0.0);
  CHECK(disk_inclusion(2.0, 0.5, {1.0, 0, 0}).u == doctest::Approx(1.0 - 0.25 / 3.0));
  CHECK(disk_inclusion(2.0, 0.5, {0, 0, 0}).u == 0.0);
  CHECK_THROWS_AS(disk_inclusion(2.0, 1.5, {0, 0, 0}), ParameterError);
  // trace continuity across |x| = R
  const double r = 0.5;
  for (double th : {0.1, 1.3, 2.9}) {
    const Point x{r * std::cos(th), r * std::sin(th), 0};
    CHECK(disk_inclusion_branch(2.0, r, x, true).u == doctest::Approx(disk_inclusion_branch(2.0, r, x, false).u));
  }
}

TEST_CASE("eigenmodes")
{
  const std::vector<int> p11{1, 1}, p21{2, 1};
  const Point x{0.3, -0.6, 0};
  const double pure = std::sin(std::numbers::pi * 0.3) * std::sin(-std::numbers::pi * 0.6);
  CHECK(eigenmode_decay(2, p11, x, 0.0).u == doctest::Approx(pure));
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(eigenmode_decay(2, p11, x, 1.0 / (2 * pi2)).u == doctest::Approx(pure * std::exp(-1.0)));
  const double dt = 0.01;
  CHECK(eigenmode_decay(2, p21, x, 0.2 + dt).u / eigenmode_decay(2, p21, x, 0.2).u ==
        doctest::Approx(std::exp(-5 * pi2 * dt)));
  CHECK(eigenmode_rate(p21) == doctest::Approx(5 * pi2));
  const auto o = eigenmode_oracle(2, p11, -1.0);
  CHECK(o.value(x, -1.0)[0] == doctest::Approx(pure));
  // zero on the boundary of the square
  CHECK(std::abs(o.value({1.0, 0.3, 0}, -0.5)[0]) < 1e-15);
}

TEST_CASE("vector oracles")
{
  const auto base = flat_interface_oracle(1.0, 4.0);
  const auto two = vector_decoupled(base, 2);
  const auto scaled = vector_decoupled(base, 2, {1.0, 3.0});
  for (const Point x : {Point{0.2, 0.4, 0}, Point{-0.5, -0.3, 0}}) {
    const auto b = base.value(x)[0];
    CHECK(two.value(x)[0] == b);
    CHECK(two.value(x)[1] == b);
    CHECK(scaled.value(x)[1] == doctest::Approx(3 * b));
    const auto g = scaled.gradient(x);
    REQUIRE(g.size() == 4);
    CHECK(g[3] == doctest::Approx(3 * base.gradient(x)[1]));
  }
  const auto aff = affine_oracle(2, 2, {1, 2, 3, 4}, {0.5, -0.5});
  CHECK(aff.value({1, 1, 0})[0] == doctest::Approx(3.5));
  CHECK(aff.value({1, 1, 0})[1] == doctest::Approx(6.5));
  CHECK_THROWS_AS(affine_oracle(2, 2, {1, 2}, {0, 0}), ParameterError);
}

TEST_CASE("decoupled system solve matches per-component solves")
{
  const auto base = disk_inclusion_oracle(2.0, 0.5);
  const auto o = vector_decoupled(base, 2, {1.0, 3.0});
  const auto trace = [](const FieldOracle& f) {
    return [f](const Point& x, double t, std::span<double> out) {
      const auto v = f.value(x, t);
      std::copy(v.begin(), v.end(), out.begin());
    };
  };
  CgOptions opt;
  opt.tol = 1e-14;
  const Grid g(2, 32);
  const auto sys = solve_transmission(verify(TransmissionProblem(CoefficientTensor::identity(2, 2),
                                                                 CoefficientTensor::identity(2, 2, 2.0),
                                                                 IndicatorDomain::ball({0, 0, 0}, 0.5), trace(o)),
                                             64),
                                      g, opt)
                       .field;
  const auto one = solve_transmission(verify(TransmissionProblem(CoefficientTensor::identity(2, 1),
                                                                 CoefficientTensor::identity(2, 1, 2.0),
                                                                 IndicatorDomain::ball({0, 0, 0}, 0.5), trace(base)),
                                             64),
                                      g, opt)
                       .field;
  for (Index k = 0; k < g.node_count(); ++k) {
    CHECK(std::abs(sys.value(k, 0) - one.value(k, 0)) < 1e-12);
    CHECK(std::abs(sys.value(k, 1) - 3 * one.value(k, 0)) < 3e-12);
  }
}

TEST_CASE("residual suite")
{
  const auto rows = run_checks(20000);
  CHECK(rows.size() >= 9);
  for (const auto& row : rows) {
    INFO(row.oracle << " " << row.check << " " << row.max_residual);
    CHECK(row.pass());
    CHECK(row.points > 0);
  }
}
