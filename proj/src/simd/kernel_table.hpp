#pragma once

#include <cstddef>

// Internal: per-ISA kernel tables. Only dispatch.cpp and the kernel TUs
// include this.
namespace tul::simd::detail {

struct KernelTable {
  void (*axpy)(std::size_t, float, const float*, float*);
  float (*dot)(std::size_t, const float*, const float*);
  void (*scale)(std::size_t, float, float*);
  void (*add)(std::size_t, const float*, float*);
  void (*mul)(std::size_t, const float*, const float*, float*);
  void (*mul_add)(std::size_t, const float*, const float*, float*);
  float (*vsum)(std::size_t, const float*);
  float (*vmax)(std::size_t, const float*);
  void (*vexp)(std::size_t, const float*, float*);
  void (*vtanh)(std::size_t, const float*, float*);
  void (*vsigmoid)(std::size_t, const float*, float*);
  void (*vrelu)(std::size_t, const float*, float*);
  void (*tanh_backward)(std::size_t, const float*, const float*, float*);
  void (*sigmoid_backward)(std::size_t, const float*, const float*, float*);
  void (*relu_backward)(std::size_t, const float*, const float*, float*);
  void (*gemm)(bool, bool, std::size_t, std::size_t, std::size_t, float, const float*,
               std::size_t, const float*, std::size_t, float, float*, std::size_t);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
#define TUL_HAVE_AVX2_BUILD 1
const KernelTable& avx2_table();
#else
#define TUL_HAVE_AVX2_BUILD 0
#endif

} // namespace tul::simd::detail
