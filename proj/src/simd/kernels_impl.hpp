#pragma once

// Per-ISA kernel entry points. This header is included by the AVX2
// translation unit, so it must not pull in any inline library code.

#include <cstddef>
#include <cstdint>

namespace translab::simd::detail {

double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void xpay_scalar(const double* x, double b, double* y, std::size_t n);
void mul_scalar(const double* d, const double* x, double* y, std::size_t n);
void spmv_scalar(std::size_t rows, const std::int32_t* row_ptr, const std::int32_t* cols,
                 const double* vals, const double* x, double* y);

double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void xpay_avx2(const double* x, double b, double* y, std::size_t n);
void mul_avx2(const double* d, const double* x, double* y, std::size_t n);
void spmv_avx2(std::size_t rows, const std::int32_t* row_ptr, const std::int32_t* cols,
               const double* vals, const double* x, double* y);

} // namespace translab::simd::detail
