#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace translab::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Vector kernels used by the Krylov solver. All pointers address `n`
/// contiguous doubles; no alignment is required.
struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y <- y + a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y <- x + b*y
  void (*xpay)(const double* x, double b, double* y, std::size_t n);
  // y <- d .* x
  void (*mul)(const double* d, const double* x, double* y, std::size_t n);
  // y <- A x for a CSR matrix with `rows` rows
  void (*spmv)(std::size_t rows, const std::int32_t* row_ptr, const std::int32_t* cols,
               const double* vals, const double* x, double* y);
};

/// True when the running CPU can execute `isa`.
bool cpu_supports(Isa isa);

/// Kernels for a specific ISA. Throws ParameterError if the CPU lacks it or
/// it was not compiled in.
const KernelTable& kernels_for(Isa isa);

/// The widest supported ISA, chosen once per process. Setting the
/// environment variable TRANSLAB_SIMD=scalar forces the reference path.
const KernelTable& kernels();

/// Every ISA usable on this machine, scalar first.
std::vector<Isa> available_isas();

} // namespace translab::simd
