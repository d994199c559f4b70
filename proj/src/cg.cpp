#include "translab/error.hpp"
#include "translab/fem.hpp"

#include <fmt/format.h>

#include <cmath>

namespace translab {

CgResult solve_cg(const CsrMatrix& a, std::span<const double> b, std::span<const double> x0, const CgOptions& opt)
{
  const auto& k = opt.kernels ? *opt.kernels : simd::kernels();
  const std::size_t n = static_cast<std::size_t>(a.rows());
  if (b.size() != n || (!x0.empty() && x0.size() != n))
    throw ParameterError("solve_cg: vector sizes do not match the matrix");
  if (!a.is_symmetric(1e-12))
    throw ParameterError("solve_cg: matrix is not symmetric");

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a.diagonal(static_cast<Index>(i));
    if (!(d > 0.0))
      throw ParameterError(fmt::format("solve_cg: non-positive diagonal {} at row {}", d, i));
    inv_diag[i] = 1.0 / d;
  }

  CgResult out;
  out.x.assign(x0.begin(), x0.end());
  if (out.x.empty())
    out.x.assign(n, 0.0);

  const double b_norm = std::sqrt(k.dot(b.data(), b.data(), n));
  if (b_norm == 0.0) {
    std::fill(out.x.begin(), out.x.end(), 0.0);
    return out;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  a.multiply(out.x, q, k);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = b[i] - q[i];
  double r_norm = std::sqrt(k.dot(r.data(), r.data(), n));
  const double target = opt.tol * b_norm;
  const int max_iter = opt.max_iter > 0 ? opt.max_iter : static_cast<int>(10 * n + 100);

  k.mul(inv_diag.data(), r.data(), z.data(), n);
  p = z;
  double rho = k.dot(r.data(), z.data(), n);
  int it = 0;
  while (r_norm > target) {
    if (it == max_iter)
      throw ConvergenceError(
          fmt::format("conjugate gradients stopped after {} iterations at relative residual {:.3e}", it,
                      r_norm / b_norm),
          r_norm / b_norm, it);
    a.multiply(p, q, k);
    const double alpha = rho / k.dot(p.data(), q.data(), n);
    k.axpy(alpha, p.data(), out.x.data(), n);
    k.axpy(-alpha, q.data(), r.data(), n);
    k.mul(inv_diag.data(), r.data(), z.data(), n);
    const double rho_next = k.dot(r.data(), z.data(), n);
    k.xpay(z.data(), rho_next / rho, p.data(), n);
    rho = rho_next;
    r_norm = std::sqrt(k.dot(r.data(), r.data(), n));
    ++it;
  }
  out.iterations = it;
  out.residual = r_norm / b_norm;
  return out;
}

CgResult solve_cg(const SparseSystem& s, const CgOptions& opt)
{
  auto out = solve_cg(s.matrix, s.rhs, s.dirichlet_values, opt);
  for (std::size_t i = 0; i < out.x.size(); ++i)
    if (s.dirichlet[i])
      out.x[i] = s.dirichlet_values[i];
  return out;
}

} // namespace translab
