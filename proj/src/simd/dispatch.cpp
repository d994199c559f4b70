#include "translab/simd/kernels.hpp"

#include "kernels_impl.hpp"
#include "translab/error.hpp"

#include <cstdlib>
#include <string>

namespace translab::simd {

namespace {

constexpr KernelTable scalar_table{
    Isa::scalar,         detail::dot_scalar, detail::axpy_scalar,
    detail::xpay_scalar, detail::mul_scalar, detail::spmv_scalar,
};

#if defined(TRANSLAB_HAVE_AVX2)
constexpr KernelTable avx2_table{
    Isa::avx2,         detail::dot_avx2, detail::axpy_avx2,
    detail::xpay_avx2, detail::mul_avx2, detail::spmv_avx2,
};
#endif

const KernelTable& select_default()
{
  if (const char* env = std::getenv("TRANSLAB_SIMD"); env && std::string(env) == "scalar")
    return scalar_table;
  if (cpu_supports(Isa::avx2))
    return kernels_for(Isa::avx2);
  return scalar_table;
}

} // namespace

std::string_view isa_name(Isa isa)
{
  switch (isa) {
  case Isa::scalar: return "scalar";
  case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa)
{
  switch (isa) {
  case Isa::scalar: return true;
  case Isa::avx2:
#if defined(TRANSLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa)
{
  if (!cpu_supports(isa))
    throw ParameterError("instruction set '" + std::string(isa_name(isa)) + "' is not available");
#if defined(TRANSLAB_HAVE_AVX2)
  if (isa == Isa::avx2)
    return avx2_table;
#endif
  return scalar_table;
}

const KernelTable& kernels()
{
  static const KernelTable& table = select_default();
  return table;
}

std::vector<Isa> available_isas()
{
  std::vector<Isa> out{Isa::scalar};
  if (cpu_supports(Isa::avx2))
    out.push_back(Isa::avx2);
  return out;
}

} // namespace translab::simd
