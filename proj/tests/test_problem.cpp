#include "translab/error.hpp"
#include "translab/problem.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace translab;

namespace {

VectorField zero_data(int m)
{
  return [m](const Point&, double, std::span<double> out) {
    for (int i = 0; i < m; ++i)
      out[i] = 0.0;
  };
}

TransmissionProblem flat(double a, double b)
{
  return TransmissionProblem(CoefficientTensor::identity(2, 1, a, std::min({0.5, a, 1.0 / a})),
                             CoefficientTensor::identity(2, 1, b, std::min({0.5, b, 1.0 / b})),
                             IndicatorDomain::half_space({0, 1, 0}, 0.0), zero_data(1));
}

constexpr double pi = std::numbers::pi;

} // namespace

TEST_CASE("effective tensor picks A outside and B inside D")
{
  const auto p = flat(1.0, 4.0);
  CHECK(p.effective_tensor({0.0, -0.5, 0.0})[0] == 1.0);
  CHECK(p.effective_tensor({0.0, 0.5, 0.0})[0] == 4.0);

  const auto id = CoefficientTensor::identity(2, 2);
  const TransmissionProblem same(id, id, IndicatorDomain::ball({0, 0, 0}, 0.5), zero_data(2));
  for (const Point x : {Point{0, 0, 0}, Point{0.9, 0.1, 0}}) {
    const auto t = same.effective_tensor(x);
    REQUIRE(t.size() == 16);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        CHECK(t[r * 4 + c] == (r == c ? 1.0 : 0.0));
  }
}

TEST_CASE("condition verification")
{
  SUBCASE("identity passes with observed lambda 1")
  {
    const auto id = CoefficientTensor::identity(2, 1);
    const TransmissionProblem p(id, id, IndicatorDomain::empty(), zero_data(1));
    const auto rep = verify_conditions(p, 256);
    CHECK(rep.ok());
    CHECK(rep.a.lambda_observed == doctest::Approx(1.0));
    CHECK_NOTHROW(verify(p, 256));
  }
  SUBCASE("a zero diagonal block fails ellipticity with a witness")
  {
    std::vector<double> mat(16, 0.0);
    mat[0] = mat[5] = 1.0; // first component only
    const auto a = CoefficientTensor::constant(2, 2, mat, 0.5);
    const TransmissionProblem p(a, a, IndicatorDomain::empty(), zero_data(2));
    const auto rep = verify_conditions(p, 64);
    CHECK_FALSE(rep.a.ellipticity_ok);
    REQUIRE(rep.a.witness.has_value());
    CHECK(rep.a.witness->xi.size() == 4);
    CHECK(std::abs(rep.a.witness->xi[2]) + std::abs(rep.a.witness->xi[3]) > 0.5);
    CHECK_THROWS_AS(verify(p, 64), ValidationError);
  }
  SUBCASE("unbounded entries fail")
  {
    const auto a = CoefficientTensor::identity(2, 1, 3.0, 0.5);
    const TransmissionProblem p(a, a, IndicatorDomain::empty(), zero_data(1));
    CHECK_FALSE(verify_conditions(p, 16).a.boundedness_ok);
  }
  SUBCASE("(1 + |x|) I is Dini with seminorm at most 1")
  {
    const auto a = CoefficientTensor::scaled_identity(
        2, 1, [](const Point& x) { return 1.0 + 0.25 * norm(x); }, 0.5,
        DiniBound{Modulus::power(1.0), 1.0}, "1+|x|/4");
    const TransmissionProblem p(a, CoefficientTensor::identity(2, 1), IndicatorDomain::empty(), zero_data(1));
    const auto rep = verify_conditions(p, 2048);
    REQUIRE(rep.a.dini_seminorm_observed.has_value());
    CHECK(*rep.a.dini_seminorm_observed <= 1.0);
    CHECK(*rep.a.dini_seminorm_observed > 0.2);
    CHECK(rep.ok());
  }
  SUBCASE("a rougher field than declared fails the Dini check")
  {
    const auto a = CoefficientTensor::scaled_identity(
        2, 1, [](const Point& x) { return 1.0 + 0.25 * std::sqrt(std::abs(x[0])); }, 0.5,
        DiniBound{Modulus::power(1.0), 1.0}, "sqrt");
    const TransmissionProblem p(a, a, IndicatorDomain::empty(), zero_data(1));
    const auto rep = verify_conditions(p, 2048);
    CHECK_FALSE(rep.a.dini_ok);
    CHECK(rep.a.witness.has_value());
  }
  CHECK_THROWS_AS(verify_conditions(flat(1, 2), 0), ParameterError);
}

TEST_CASE("halton points are deterministic and well spread")
{
  CHECK(halton(1, 2)[0] == doctest::Approx(0.5));
  CHECK(halton(1, 2)[1] == doctest::Approx(1.0 / 3.0));
  CHECK(halton(2, 2)[0] == doctest::Approx(0.25));
  CHECK(halton(5, 3)[2] == doctest::Approx(0.04));
  double mean = 0.0;
  for (int k = 1; k <= 1000; ++k)
    mean += halton(k, 2)[1];
  CHECK(mean / 1000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("domains")
{
  const auto hs = IndicatorDomain::half_space({0, 1, 0}, 0.0);
  CHECK(hs.contains({0, 0.1, 0}));
  CHECK_FALSE(hs.contains({0, -0.1, 0}));
  const auto disk = IndicatorDomain::ball({0.5, 0, 0}, 0.25);
  CHECK(disk.contains({0.6, 0.1, 0}));
  CHECK_FALSE(disk.contains({0.0, 0.0, 0}));
  CHECK(IndicatorDomain::complement(disk).contains({0.0, 0.0, 0}));
  const auto u = IndicatorDomain::union_of({disk, IndicatorDomain::ball({-0.5, 0, 0}, 0.25)});
  CHECK(u.contains({-0.5, 0.1, 0}));
  CHECK(u.contains({0.5, 0.1, 0}));
  CHECK_FALSE(u.contains({0, 0.1, 0}));
  CHECK_FALSE(IndicatorDomain::empty().contains({0, 0, 0}));

  // {x2 < -|x1|^(1/gamma)} inside B_1
  const auto cusp = IndicatorDomain::cusp(0.5, {0, 0, 0}, 1);
  CHECK(cusp.contains({0.1, -0.5, 0}));
  CHECK_FALSE(cusp.contains({0.5, -0.2, 0}));
  CHECK_FALSE(cusp.contains({0.0, 0.1, 0}));
  CHECK_FALSE(cusp.contains({0.0, -1.2, 0}));

  const auto moving = hs.moving({0, 1, 0});
  CHECK(moving.contains({0, 0.1, 0}, 0.0));
  CHECK_FALSE(moving.contains({0, 0.1, 0}, 0.2));
  CHECK_FALSE(moving.is_static());
  const auto slab = IndicatorDomain::time_slab(-0.5);
  CHECK(slab.contains({0, 0, 0}, -0.7));
  CHECK_FALSE(slab.contains({0, 0, 0}, -0.3));
  CHECK(hs.is_static());
  CHECK_THROWS_AS(IndicatorDomain::cusp(-1.0, {0, 0, 0}, 1), ParameterError);
}

TEST_CASE("rescaled densities")
{
  const int res = 512;
  CHECK(rescaled_density(IndicatorDomain::empty(), 2, {0.1, 0.2, 0}, 0.3, res) == 0.0);
  for (double r : {0.5, 0.25, 0.125}) {
    const Point z{0.1, -0.2, 0};
    const auto hs = IndicatorDomain::half_space({0, 1, 0}, z[1]);
    CHECK(std::abs(rescaled_density(hs, 2, z, r, res) - pi / 2) < 1e-3);
  }
  const auto disk = IndicatorDomain::ball({0, 0, 0}, 0.25);
  CHECK(std::abs(rescaled_density(disk, 2, {0, 0, 0}, 0.5, res) - pi / 4) < 2e-3);
  CHECK(rescaled_density(IndicatorDomain::complement(IndicatorDomain::empty()), 2, {0, 0, 0}, 0.5, res) ==
        doctest::Approx(pi).epsilon(2e-3));

  SUBCASE("monotone under inclusion")
  {
    const auto small = IndicatorDomain::ball({0.1, 0.1, 0}, 0.2);
    const auto big = IndicatorDomain::ball({0.1, 0.1, 0}, 0.3);
    CHECK(rescaled_density(small, 2, {0, 0, 0}, 0.5, 256) <= rescaled_density(big, 2, {0, 0, 0}, 0.5, 256));
  }
  SUBCASE("doubling identity")
  {
    const auto cusp = IndicatorDomain::cusp(0.5, {0, 0, 0}, 1);
    for (double r : {0.5, 0.25, 0.125}) {
      const Point z{0.0, -0.1, 0};
      const double lhs = rescaled_density(cusp, 2, z, r / 2, res);
      // twice the resolution puts both sides on the same physical points
      const double rhs = 4.0 * rescaled_density(cusp, 2, z, r, 2 * res, 0.5);
      CHECK(std::abs(lhs - rhs) < 1e-3);
    }
  }
  SUBCASE("three dimensions")
  {
    const auto hs = IndicatorDomain::half_space({0, 0, 1}, 0.0);
    CHECK(rescaled_density(hs, 3, {0, 0, 0}, 0.5, 64) ==
          doctest::Approx(2.0 * pi / 3.0).epsilon(0.01));
  }
  CHECK_THROWS_AS(rescaled_density(disk, 2, {0.8, 0, 0}, 0.5, res), GeometryError);
  CHECK_THROWS_AS(rescaled_density(disk, 2, {0, 0, 0}, 0.5, 16), ParameterError);
}

TEST_CASE("parabolic densities")
{
  const int res = 128;
  CHECK(parabolic_rescaled_density(IndicatorDomain::empty(), 2, {0, 0, 0}, 0.0, 1.0, res) == 0.0);
  const auto hs = IndicatorDomain::half_space({1, 0, 0}, 0.0);
  CHECK(std::abs(parabolic_rescaled_density(hs, 2, {0, 0, 0}, 0.0, 1.0, res) - pi / 2) < 5e-3);
  const auto slab = IndicatorDomain::time_slab(-0.5);
  const double full = parabolic_rescaled_density(IndicatorDomain::complement(IndicatorDomain::empty()), 2,
                                                 {0, 0, 0}, 0.0, 1.0, res);
  CHECK(parabolic_rescaled_density(slab, 2, {0, 0, 0}, 0.0, 1.0, res) == doctest::Approx(full / 2));
  CHECK_THROWS_AS(parabolic_rescaled_density(hs, 2, {0, 0, 0}, 0.5, 0.5, res), GeometryError);
  CHECK_THROWS_AS(parabolic_rescaled_density(hs, 2, {0, 0, 0}, -0.9, 0.5, res), GeometryError);
}

TEST_CASE("scaled data and hash")
{
  const auto p = flat(1.0, 4.0);
  CHECK(p.hash() == flat(1.0, 4.0).hash());
  CHECK(p.is_static());
  const TransmissionProblem q(CoefficientTensor::identity(2, 1), CoefficientTensor::identity(2, 1),
                              IndicatorDomain::empty(),
                              [](const Point& x, double, std::span<double> out) { out[0] = x[0]; });
  const auto s = q.scaled_data(3.0);
  double v = 0.0;
  s.boundary()({0.5, 0, 0}, 0.0, std::span<double>(&v, 1));
  CHECK(v == doctest::Approx(1.5));
}
