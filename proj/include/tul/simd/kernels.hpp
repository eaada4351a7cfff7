#pragma once

#include <cstddef>

#include "tul/simd/dispatch.hpp"

// Float32 compute kernels behind runtime ISA dispatch. Every kernel has a
// scalar reference implementation and (on x86) an AVX2+FMA variant; the two
// are equivalence-tested against each other. Higher-level code must not
// depend on which variant runs beyond documented tolerances.
namespace tul::simd {

// ---- level-1 ----

/// y += a * x
void axpy(std::size_t n, float a, const float* x, float* y);
/// sum_i x[i] * y[i]
float dot(std::size_t n, const float* x, const float* y);
/// x *= a
void scale(std::size_t n, float a, float* x);
/// y += x
void add(std::size_t n, const float* x, float* y);
/// out = x * y  (elementwise)
void mul(std::size_t n, const float* x, const float* y, float* out);
/// out += x * y (elementwise)
void mul_add(std::size_t n, const float* x, const float* y, float* out);
/// sum of elements
float vsum(std::size_t n, const float* x);
/// maximum element; n must be >= 1
float vmax(std::size_t n, const float* x);

// ---- elementwise transcendentals ----
// AVX2 variants use a polynomial exp; absolute error vs. the scalar
// reference is below 1e-6 over the numeric range the toolkit produces.

void vexp(std::size_t n, const float* x, float* y);
void vtanh(std::size_t n, const float* x, float* y);
void vsigmoid(std::size_t n, const float* x, float* y);
void vrelu(std::size_t n, const float* x, float* y);

// ---- fused activation backward passes (y = forward output) ----

/// dx += dy * (1 - y^2)
void tanh_backward(std::size_t n, const float* y, const float* dy, float* dx);
/// dx += dy * y * (1 - y)
void sigmoid_backward(std::size_t n, const float* y, const float* dy, float* dx);
/// dx += dy * [y > 0]
void relu_backward(std::size_t n, const float* y, const float* dy, float* dx);

// ---- level-3 ----

/// C[m x n] = alpha * op(A) * op(B) + beta * C, all row-major.
/// op(A) is m x k (A stored k x m when trans_a), op(B) is k x n.
/// lda/ldb/ldc are row strides of the stored matrices.
void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k,
          float alpha, const float* a, std::size_t lda, const float* b, std::size_t ldb,
          float beta, float* c, std::size_t ldc);

// ---- composites (built on dispatched kernels) ----

/// In-place numerically-stable softmax over one row.
void softmax_row(std::size_t n, float* x);

} // namespace tul::simd
