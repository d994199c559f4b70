#include "kernels_impl.hpp"

namespace translab::simd::detail {

double dot_scalar(const double* x, const double* y, std::size_t n)
{
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i)
    y[i] += a * x[i];
}

void xpay_scalar(const double* x, double b, double* y, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i)
    y[i] = x[i] + b * y[i];
}

void mul_scalar(const double* d, const double* x, double* y, std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i)
    y[i] = d[i] * x[i];
}

void spmv_scalar(std::size_t rows, const std::int32_t* row_ptr, const std::int32_t* cols,
                 const double* vals, const double* x, double* y)
{
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

} // namespace translab::simd::detail
