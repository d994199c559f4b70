#include "translab/error.hpp"
#include "translab/fem.hpp"
#include "translab/simd/kernels.hpp"
#include "translab/sparse.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace translab;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v)
    x = u(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

TEST_CASE("scalar kernels are always available")
{
  CHECK(simd::cpu_supports(simd::Isa::scalar));
  CHECK(simd::available_isas().front() == simd::Isa::scalar);
  CHECK(simd::kernels_for(simd::Isa::scalar).isa == simd::Isa::scalar);
}

TEST_CASE("every available isa matches the scalar reference")
{
  const auto& ref = simd::kernels_for(simd::Isa::scalar);
  for (auto isa : simd::available_isas()) {
    CAPTURE(simd::isa_name(isa));
    const auto& k = simd::kernels_for(isa);
    // odd lengths exercise the remainder loops
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 1000u, 1003u}) {
      CAPTURE(n);
      const auto x = random_vector(n, 1 + n);
      const auto y = random_vector(n, 100 + n);
      const double d_ref = ref.dot(x.data(), y.data(), n);
      const double d = k.dot(x.data(), y.data(), n);
      CHECK(std::abs(d - d_ref) <= 1e-13 * (1.0 + std::abs(d_ref)) * std::sqrt(double(n) + 1));

      auto a = y, b = y;
      ref.axpy(0.37, x.data(), a.data(), n);
      k.axpy(0.37, x.data(), b.data(), n);
      CHECK(max_abs_diff(a, b) <= 1e-15);

      a = y, b = y;
      ref.xpay(x.data(), -1.3, a.data(), n);
      k.xpay(x.data(), -1.3, b.data(), n);
      CHECK(max_abs_diff(a, b) <= 1e-15);

      a.assign(n, 0.0), b.assign(n, 0.0);
      ref.mul(x.data(), y.data(), a.data(), n);
      k.mul(x.data(), y.data(), b.data(), n);
      CHECK(max_abs_diff(a, b) == 0.0);
    }
  }
}

TEST_CASE("sparse matrix-vector product agrees across isas")
{
  for (int m : {1, 2}) {
    const Grid g(2, 16);
    CsrMatrix k = q1_pattern(g, m);
    auto vals = random_vector(static_cast<std::size_t>(k.nnz()), 7 + m);
    std::copy(vals.begin(), vals.end(), k.values().begin());
    const auto x = random_vector(static_cast<std::size_t>(k.rows()), 11);
    std::vector<double> y_ref(x.size()), y(x.size());
    k.multiply(x, y_ref, simd::kernels_for(simd::Isa::scalar));
    for (auto isa : simd::available_isas()) {
      k.multiply(x, y, simd::kernels_for(isa));
      CHECK(max_abs_diff(y, y_ref) <= 1e-13);
    }
  }
}

TEST_CASE("CG gives the same solution with every isa")
{
  const Grid g(2, 32);
  CsrMatrix k = q1_pattern(g, 1);
  add_stiffness(k, g, 1, [](const Point& x, std::span<double> out) {
    const double s = 1.0 + 0.5 * x[0] * x[0];
    out[0] = s;
    out[1] = 0.0;
    out[2] = 0.0;
    out[3] = s;
  });
  std::vector<double> b = random_vector(static_cast<std::size_t>(k.rows()), 3);
  auto mask = boundary_dofs(g, 1);
  std::vector<double> zeros(b.size(), 0.0);
  apply_dirichlet(k, b, mask, zeros);
  CgOptions opt;
  opt.tol = 1e-12;
  opt.kernels = &simd::kernels_for(simd::Isa::scalar);
  const auto ref = solve_cg(k, b, {}, opt);
  for (auto isa : simd::available_isas()) {
    opt.kernels = &simd::kernels_for(isa);
    const auto r = solve_cg(k, b, {}, opt);
    CHECK(max_abs_diff(r.x, ref.x) <= 1e-9);
    CHECK(r.residual <= 1e-12);
  }
}

TEST_CASE("requesting an unavailable isa is a parameter error")
{
  if (!simd::cpu_supports(simd::Isa::avx2))
    CHECK_THROWS_AS(simd::kernels_for(simd::Isa::avx2), ParameterError);
  else
    CHECK(simd::kernels_for(simd::Isa::avx2).isa == simd::Isa::avx2);
}
