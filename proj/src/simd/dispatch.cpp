#include "tul/simd/dispatch.hpp"

#include <cstdlib>
#include <cstring>

#include "kernel_table.hpp"
#include "tul/parallel.hpp"
#include "tul/simd/kernels.hpp"

namespace tul::simd {
namespace {

using detail::KernelTable;

const KernelTable* g_table = nullptr;
Isa g_isa = Isa::scalar;

Isa env_isa(Isa fallback) {
  const char* env = std::getenv("TUL_ISA");
  if (!env) return fallback;
  if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
  if (std::strcmp(env, "avx2") == 0) return Isa::avx2;
  return fallback;
}

void apply(Isa isa) {
#if TUL_HAVE_AVX2_BUILD
  if (isa == Isa::avx2 && detect_isa() == Isa::avx2) {
    g_table = &detail::avx2_table();
    g_isa = Isa::avx2;
    return;
  }
#endif
  g_table = &detail::scalar_table();
  g_isa = Isa::scalar;
}

const KernelTable& table() {
  if (!g_table) apply(env_isa(detect_isa()));
  return *g_table;
}

} // namespace

Isa detect_isa() {
#if TUL_HAVE_AVX2_BUILD
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa active_isa() {
  table();
  return g_isa;
}

void select_isa(Isa isa) { apply(isa); }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void axpy(std::size_t n, float a, const float* x, float* y) { table().axpy(n, a, x, y); }
float dot(std::size_t n, const float* x, const float* y) { return table().dot(n, x, y); }
void scale(std::size_t n, float a, float* x) { table().scale(n, a, x); }
void add(std::size_t n, const float* x, float* y) { table().add(n, x, y); }
void mul(std::size_t n, const float* x, const float* y, float* out) { table().mul(n, x, y, out); }
void mul_add(std::size_t n, const float* x, const float* y, float* out) {
  table().mul_add(n, x, y, out);
}
float vsum(std::size_t n, const float* x) { return table().vsum(n, x); }
float vmax(std::size_t n, const float* x) { return table().vmax(n, x); }
void vexp(std::size_t n, const float* x, float* y) { table().vexp(n, x, y); }
void vtanh(std::size_t n, const float* x, float* y) { table().vtanh(n, x, y); }
void vsigmoid(std::size_t n, const float* x, float* y) { table().vsigmoid(n, x, y); }
void vrelu(std::size_t n, const float* x, float* y) { table().vrelu(n, x, y); }
void tanh_backward(std::size_t n, const float* y, const float* dy, float* dx) {
  table().tanh_backward(n, y, dy, dx);
}
void sigmoid_backward(std::size_t n, const float* y, const float* dy, float* dx) {
  table().sigmoid_backward(n, y, dy, dx);
}
void relu_backward(std::size_t n, const float* y, const float* dy, float* dx) {
  table().relu_backward(n, y, dy, dx);
}

void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, float alpha,
          const float* a, std::size_t lda, const float* b, std::size_t ldb, float beta, float* c,
          std::size_t ldc) {
  const KernelTable& t = table();
  // Split output rows across threads for large products. Each row of C is
  // produced by exactly one thread, so results do not depend on the split.
  const std::size_t work = m * n * k;
  if (m >= 2 && work >= (std::size_t(1) << 18) && thread_count() > 1) {
    parallel_for(m, [&](std::size_t r0, std::size_t r1) {
      const float* ablk = trans_a ? a + r0 : a + r0 * lda;
      t.gemm(trans_a, trans_b, r1 - r0, n, k, alpha, ablk, lda, b, ldb, beta, c + r0 * ldc, ldc);
    });
  } else {
    t.gemm(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
  }
}

void softmax_row(std::size_t n, float* x) {
  if (n == 0) return;
  float m = vmax(n, x);
  for (std::size_t i = 0; i < n; ++i) x[i] -= m;
  vexp(n, x, x);
  float s = vsum(n, x);
  scale(n, 1.0f / s, x);
}

} // namespace tul::simd
