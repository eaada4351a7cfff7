// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma in its own TU;
// dispatch.cpp only routes here when the CPU reports AVX2 support.
//
// exp/tanh/sigmoid use a degree-5 polynomial exp (Cephes coefficients).
// Absolute error vs. the scalar reference stays under 1e-6; the
// equivalence suite in tests/test_kernels.cpp pins that bound.

#include "kernel_table.hpp"

#if TUL_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace tul::simd::detail {
namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

void axpy_avx2(std::size_t n, float a, const float* x, float* y) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vy = _mm256_loadu_ps(y + i);
    vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy);
    _mm256_storeu_ps(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

float dot_avx2(std::size_t n, const float* x, const float* y) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    acc = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc);
  float s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void scale_avx2(std::size_t n, float a, float* x) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void add_avx2(std::size_t n, const float* x, float* y) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) y[i] += x[i];
}

void mul_avx2(std::size_t n, const float* x, const float* y, float* out) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void mul_add_avx2(std::size_t n, const float* x, const float* y, float* out) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vo = _mm256_loadu_ps(out + i);
    vo = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), vo);
    _mm256_storeu_ps(out + i, vo);
  }
  for (; i < n; ++i) out[i] += x[i] * y[i];
}

float vsum_avx2(std::size_t n, const float* x) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
  float s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

float vmax_avx2(std::size_t n, const float* x) {
  if (n < 8) {
    float m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
    return m;
  }
  __m256 acc = _mm256_loadu_ps(x);
  std::size_t i = 8;
  for (; i + 8 <= n; i += 8) acc = _mm256_max_ps(acc, _mm256_loadu_ps(x + i));
  __m128 lo = _mm_max_ps(_mm256_castps256_ps128(acc), _mm256_extractf128_ps(acc, 1));
  lo = _mm_max_ps(lo, _mm_movehl_ps(lo, lo));
  lo = _mm_max_ss(lo, _mm_shuffle_ps(lo, lo, 1));
  float m = _mm_cvtss_f32(lo);
  for (; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

// Polynomial expf, valid over [-87.3, 88.7]; inputs outside are clamped,
// matching how scalar expf saturates in float anyway.
inline __m256 exp256(__m256 x) {
  const __m256 hi = _mm256_set1_ps(88.3762626647950f);
  const __m256 lo = _mm256_set1_ps(-87.3365478515625f);
  const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
  const __m256 c1 = _mm256_set1_ps(0.693359375f);
  const __m256 c2 = _mm256_set1_ps(-2.12194440e-4f);

  x = _mm256_min_ps(_mm256_max_ps(x, lo), hi);
  __m256 fx = _mm256_round_ps(_mm256_mul_ps(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_ps(fx, c1, x);
  x = _mm256_fnmadd_ps(fx, c2, x);

  __m256 z = _mm256_mul_ps(x, x);
  __m256 y = _mm256_set1_ps(1.9875691500e-4f);
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.3981999507e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(8.3334519073e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(4.1665795894e-2f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.6666665459e-1f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(5.0000001201e-1f));
  y = _mm256_fmadd_ps(y, z, _mm256_add_ps(x, _mm256_set1_ps(1.0f)));

  __m256i n = _mm256_cvtps_epi32(fx);
  n = _mm256_add_epi32(n, _mm256_set1_epi32(127));
  n = _mm256_slli_epi32(n, 23);
  return _mm256_mul_ps(y, _mm256_castsi256_ps(n));
}

void vexp_avx2(std::size_t n, const float* x, float* y) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(y + i, exp256(_mm256_loadu_ps(x + i)));
  for (; i < n; ++i) y[i] = std::exp(x[i]);
}

void vtanh_avx2(std::size_t n, const float* x, float* y) {
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 two = _mm256_set1_ps(2.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 e = exp256(_mm256_mul_ps(two, _mm256_loadu_ps(x + i)));
    __m256 t = _mm256_sub_ps(one, _mm256_div_ps(two, _mm256_add_ps(e, one)));
    _mm256_storeu_ps(y + i, t);
  }
  for (; i < n; ++i) y[i] = std::tanh(x[i]);
}

void vsigmoid_avx2(std::size_t n, const float* x, float* y) {
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 e = exp256(_mm256_sub_ps(zero, _mm256_loadu_ps(x + i)));
    _mm256_storeu_ps(y + i, _mm256_div_ps(one, _mm256_add_ps(one, e)));
  }
  for (; i < n; ++i) y[i] = 1.0f / (1.0f + std::exp(-x[i]));
}

void vrelu_avx2(std::size_t n, const float* x, float* y) {
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(y + i, _mm256_max_ps(zero, _mm256_loadu_ps(x + i)));
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void tanh_backward_avx2(std::size_t n, const float* y, const float* dy, float* dx) {
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vy = _mm256_loadu_ps(y + i);
    __m256 g = _mm256_fnmadd_ps(vy, vy, one);
    __m256 vdx = _mm256_loadu_ps(dx + i);
    _mm256_storeu_ps(dx + i, _mm256_fmadd_ps(_mm256_loadu_ps(dy + i), g, vdx));
  }
  for (; i < n; ++i) dx[i] += dy[i] * (1.0f - y[i] * y[i]);
}

void sigmoid_backward_avx2(std::size_t n, const float* y, const float* dy, float* dx) {
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vy = _mm256_loadu_ps(y + i);
    __m256 g = _mm256_mul_ps(vy, _mm256_sub_ps(one, vy));
    __m256 vdx = _mm256_loadu_ps(dx + i);
    _mm256_storeu_ps(dx + i, _mm256_fmadd_ps(_mm256_loadu_ps(dy + i), g, vdx));
  }
  for (; i < n; ++i) dx[i] += dy[i] * y[i] * (1.0f - y[i]);
}

void relu_backward_avx2(std::size_t n, const float* y, const float* dy, float* dx) {
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(y + i), zero, _CMP_GT_OQ);
    __m256 g = _mm256_and_ps(_mm256_loadu_ps(dy + i), mask);
    _mm256_storeu_ps(dx + i, _mm256_add_ps(_mm256_loadu_ps(dx + i), g));
  }
  for (; i < n; ++i) dx[i] += y[i] > 0.0f ? dy[i] : 0.0f;
}

// ---- GEMM ----
// Register-blocked 4x16 core shared by the NN and TN paths (they differ
// only in how A is indexed); NT uses a 4x2 dot-product block.

template <bool TransA>
void gemm_nx_avx2(std::size_t m, std::size_t n, std::size_t k, float alpha, const float* a,
                  std::size_t lda, const float* b, std::size_t ldb, float beta, float* c,
                  std::size_t ldc) {
  const __m256 valpha = _mm256_set1_ps(alpha);
  auto aptr = [&](std::size_t i, std::size_t p) {
    return TransA ? a + p * lda + i : a + i * lda + p;
  };

  auto store_block = [&](float* cp, __m256 acc0, __m256 acc1) {
    __m256 r0 = _mm256_mul_ps(valpha, acc0);
    __m256 r1 = _mm256_mul_ps(valpha, acc1);
    if (beta != 0.0f) {
      const __m256 vbeta = _mm256_set1_ps(beta);
      r0 = _mm256_fmadd_ps(vbeta, _mm256_loadu_ps(cp), r0);
      r1 = _mm256_fmadd_ps(vbeta, _mm256_loadu_ps(cp + 8), r1);
    }
    _mm256_storeu_ps(cp, r0);
    _mm256_storeu_ps(cp + 8, r1);
  };

  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    std::size_t j = 0;
    for (; j + 16 <= n; j += 16) {
      __m256 acc[4][2];
      for (int r = 0; r < 4; ++r) acc[r][0] = acc[r][1] = _mm256_setzero_ps();
      for (std::size_t p = 0; p < k; ++p) {
        const float* brow = b + p * ldb + j;
        __m256 b0 = _mm256_loadu_ps(brow);
        __m256 b1 = _mm256_loadu_ps(brow + 8);
        for (int r = 0; r < 4; ++r) {
          __m256 av = _mm256_broadcast_ss(aptr(i + r, p));
          acc[r][0] = _mm256_fmadd_ps(av, b0, acc[r][0]);
          acc[r][1] = _mm256_fmadd_ps(av, b1, acc[r][1]);
        }
      }
      for (int r = 0; r < 4; ++r) store_block(c + (i + r) * ldc + j, acc[r][0], acc[r][1]);
    }
    // column tail, scalar
    for (; j < n; ++j) {
      for (int r = 0; r < 4; ++r) {
        float acc = 0.0f;
        for (std::size_t p = 0; p < k; ++p) acc += *aptr(i + r, p) * b[p * ldb + j];
        float* cij = c + (i + r) * ldc + j;
        *cij = alpha * acc + (beta == 0.0f ? 0.0f : beta * *cij);
      }
    }
  }
  // row tail: one row at a time
  for (; i < m; ++i) {
    std::size_t j = 0;
    for (; j + 16 <= n; j += 16) {
      __m256 acc0 = _mm256_setzero_ps(), acc1 = _mm256_setzero_ps();
      for (std::size_t p = 0; p < k; ++p) {
        const float* brow = b + p * ldb + j;
        __m256 av = _mm256_broadcast_ss(aptr(i, p));
        acc0 = _mm256_fmadd_ps(av, _mm256_loadu_ps(brow), acc0);
        acc1 = _mm256_fmadd_ps(av, _mm256_loadu_ps(brow + 8), acc1);
      }
      store_block(c + i * ldc + j, acc0, acc1);
    }
    for (; j < n; ++j) {
      float acc = 0.0f;
      for (std::size_t p = 0; p < k; ++p) acc += *aptr(i, p) * b[p * ldb + j];
      float* cij = c + i * ldc + j;
      *cij = alpha * acc + (beta == 0.0f ? 0.0f : beta * *cij);
    }
  }
}

void gemm_nt_avx2(std::size_t m, std::size_t n, std::size_t k, float alpha, const float* a,
                  std::size_t lda, const float* b, std::size_t ldb, float beta, float* c,
                  std::size_t ldc) {
  auto finish = [&](std::size_t i, std::size_t j, float dotv) {
    float* cij = c + i * ldc + j;
    *cij = alpha * dotv + (beta == 0.0f ? 0.0f : beta * *cij);
  };
  const std::size_t kv = k & ~std::size_t(7); // vectorized prefix of k
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      __m256 acc[4][2];
      for (int r = 0; r < 4; ++r) acc[r][0] = acc[r][1] = _mm256_setzero_ps();
      for (std::size_t p = 0; p < kv; p += 8) {
        __m256 b0 = _mm256_loadu_ps(b + j * ldb + p);
        __m256 b1 = _mm256_loadu_ps(b + (j + 1) * ldb + p);
        for (int r = 0; r < 4; ++r) {
          __m256 av = _mm256_loadu_ps(a + (i + r) * lda + p);
          acc[r][0] = _mm256_fmadd_ps(av, b0, acc[r][0]);
          acc[r][1] = _mm256_fmadd_ps(av, b1, acc[r][1]);
        }
      }
      for (int r = 0; r < 4; ++r) {
        float d0 = hsum(acc[r][0]);
        float d1 = hsum(acc[r][1]);
        for (std::size_t p = kv; p < k; ++p) {
          d0 += a[(i + r) * lda + p] * b[j * ldb + p];
          d1 += a[(i + r) * lda + p] * b[(j + 1) * ldb + p];
        }
        finish(i + r, j, d0);
        finish(i + r, j + 1, d1);
      }
    }
    for (; j < n; ++j)
      for (int r = 0; r < 4; ++r)
        finish(i + r, j, dot_avx2(k, a + (i + r) * lda, b + j * ldb));
  }
  for (; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      finish(i, j, dot_avx2(k, a + i * lda, b + j * ldb));
}

void gemm_avx2(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k,
               float alpha, const float* a, std::size_t lda, const float* b, std::size_t ldb,
               float beta, float* c, std::size_t ldc) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    for (std::size_t i = 0; i < m; ++i) {
      float* crow = c + i * ldc;
      if (beta == 0.0f)
        std::fill(crow, crow + n, 0.0f);
      else
        scale_avx2(n, beta, crow);
    }
    return;
  }
  if (!trans_b) {
    if (!trans_a)
      gemm_nx_avx2<false>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    else
      gemm_nx_avx2<true>(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
  } else {
    if (!trans_a) {
      gemm_nt_avx2(m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
    } else {
      // A^T B^T: rare; fall back to the dot formulation with strided A.
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          float acc = 0.0f;
          for (std::size_t p = 0; p < k; ++p) acc += a[p * lda + i] * b[j * ldb + p];
          float* cij = c + i * ldc + j;
          *cij = alpha * acc + (beta == 0.0f ? 0.0f : beta * *cij);
        }
    }
  }
}

} // namespace

const KernelTable& avx2_table() {
  static const KernelTable t = {
      axpy_avx2,         dot_avx2,    scale_avx2,   add_avx2,
      mul_avx2,          mul_add_avx2, vsum_avx2,   vmax_avx2,
      vexp_avx2,         vtanh_avx2,  vsigmoid_avx2, vrelu_avx2,
      tanh_backward_avx2, sigmoid_backward_avx2, relu_backward_avx2,
      gemm_avx2,
  };
  return t;
}

} // namespace tul::simd::detail

#endif // TUL_HAVE_AVX2_BUILD
