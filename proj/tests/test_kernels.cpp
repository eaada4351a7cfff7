#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tul/rng.hpp"
#include "tul/simd/kernels.hpp"

using namespace tul;
namespace ks = tul::simd;

namespace {

std::vector<float> random_vec(Rng& rng, std::size_t n, float lo = -2.0f, float hi = 2.0f) {
  std::vector<float> v(n);
  for (auto& x : v) x = rng.next_float(lo, hi);
  return v;
}

// Independent GEMM oracle: plain triple loop over logical indices.
void gemm_oracle(bool ta, bool tb, std::size_t m, std::size_t n, std::size_t k, float alpha,
                 const std::vector<float>& a, std::size_t lda, const std::vector<float>& b,
                 std::size_t ldb, float beta, std::vector<float>& c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        float av = ta ? a[p * lda + i] : a[i * lda + p];
        float bv = tb ? b[j * ldb + p] : b[p * ldb + j];
        acc += double(av) * double(bv);
      }
      c[i * ldc + j] = float(alpha * acc + (beta == 0.0f ? 0.0 : double(beta) * c[i * ldc + j]));
    }
}

bool avx2_available() { return ks::detect_isa() == ks::Isa::avx2; }

// Runs fn under both kernel tables and returns the two results.
template <typename Fn>
auto under_both(Fn&& fn) {
  ks::select_isa(ks::Isa::scalar);
  auto scalar = fn();
  ks::select_isa(ks::Isa::avx2);
  auto vec = fn();
  ks::select_isa(ks::detect_isa());
  return std::make_pair(scalar, vec);
}

} // namespace

TEST_CASE("isa detection and override") {
  ks::select_isa(ks::Isa::scalar);
  CHECK(ks::active_isa() == ks::Isa::scalar);
  ks::select_isa(ks::detect_isa());
  CHECK(ks::active_isa() == ks::detect_isa());
}

TEST_CASE("level-1 kernels: scalar vs simd equivalence") {
  if (!avx2_available()) return;
  Rng rng(11);
  // Sizes straddle the 8-lane width to exercise remainders.
  for (std::size_t n : {1u, 5u, 8u, 9u, 31u, 64u, 257u}) {
    auto x = random_vec(rng, n);
    auto y0 = random_vec(rng, n);

    auto [s_axpy, v_axpy] = under_both([&] {
      auto y = y0;
      ks::axpy(n, 0.37f, x.data(), y.data());
      return y;
    });
    for (std::size_t i = 0; i < n; ++i) CHECK(s_axpy[i] == doctest::Approx(v_axpy[i]).epsilon(1e-6));

    auto [s_dot, v_dot] = under_both([&] { return ks::dot(n, x.data(), y0.data()); });
    CHECK(s_dot == doctest::Approx(v_dot).epsilon(1e-4));

    auto [s_sum, v_sum] = under_both([&] { return ks::vsum(n, x.data()); });
    CHECK(s_sum == doctest::Approx(v_sum).epsilon(1e-4));

    auto [s_max, v_max] = under_both([&] { return ks::vmax(n, x.data()); });
    CHECK(s_max == v_max); // max is exact

    auto [s_mul, v_mul] = under_both([&] {
      std::vector<float> out(n);
      ks::mul(n, x.data(), y0.data(), out.data());
      return out;
    });
    CHECK(s_mul == v_mul);
  }
}

TEST_CASE("transcendental kernels: simd within 1e-6 of scalar") {
  if (!avx2_available()) return;
  Rng rng(12);
  const std::size_t n = 1003;
  auto x = random_vec(rng, n, -12.0f, 12.0f);
  x[0] = 0.0f;
  x[1] = -0.0f;
  x[2] = 90.0f;   // exp overflow edge
  x[3] = -95.0f;  // exp underflow edge
  x[4] = 1e-6f;

  auto check_close = [&](auto fn, float tol) {
    auto [s, v] = under_both([&] {
      std::vector<float> out(n);
      fn(n, x.data(), out.data());
      return out;
    });
    float worst = 0.0f;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(s[i] - v[i]));
    CHECK(worst < tol);
  };

  check_close(ks::vtanh, 1e-6f);
  check_close(ks::vsigmoid, 1e-6f);
  check_close(ks::vrelu, 0.0f + 1e-30f); // exact

  // exp compared in relative terms over a bounded range
  auto xe = random_vec(rng, n, -20.0f, 20.0f);
  auto [s, v] = under_both([&] {
    std::vector<float> out(n);
    ks::vexp(n, xe.data(), out.data());
    return out;
  });
  for (std::size_t i = 0; i < n; ++i)
    CHECK(s[i] == doctest::Approx(v[i]).epsilon(1e-5));
}

TEST_CASE("activation backward kernels match forward-derivative identities") {
  Rng rng(13);
  const std::size_t n = 100;
  auto x = random_vec(rng, n, -3.0f, 3.0f);
  auto dy = random_vec(rng, n);
  std::vector<float> y(n);

  ks::vtanh(n, x.data(), y.data());
  std::vector<float> dx(n, 0.0f);
  ks::tanh_backward(n, y.data(), dy.data(), dx.data());
  for (std::size_t i = 0; i < n; ++i)
    CHECK(dx[i] == doctest::Approx(dy[i] * (1.0f - y[i] * y[i])));

  ks::vsigmoid(n, x.data(), y.data());
  std::fill(dx.begin(), dx.end(), 0.0f);
  ks::sigmoid_backward(n, y.data(), dy.data(), dx.data());
  for (std::size_t i = 0; i < n; ++i)
    CHECK(dx[i] == doctest::Approx(dy[i] * y[i] * (1.0f - y[i])));

  if (avx2_available()) {
    auto [sb, vb] = under_both([&] {
      std::vector<float> g(n, 0.0f);
      ks::tanh_backward(n, y.data(), dy.data(), g.data());
      return g;
    });
    for (std::size_t i = 0; i < n; ++i) CHECK(sb[i] == doctest::Approx(vb[i]).epsilon(1e-6));
  }
}

TEST_CASE("gemm matches the triple-loop oracle for every transpose combo") {
  Rng rng(14);
  struct Case {
    std::size_t m, n, k;
  };
  // Shapes chosen to hit the 4x16 block, the 4x2 dot block, and all tails.
  for (Case cs : {Case{1, 1, 1}, Case{3, 5, 7}, Case{4, 16, 8}, Case{5, 17, 9}, Case{8, 32, 16},
                  Case{13, 33, 21}, Case{6, 2, 40}, Case{64, 48, 37}}) {
    for (bool ta : {false, true})
      for (bool tb : {false, true})
        for (float beta : {0.0f, 1.0f, 0.5f}) {
          std::size_t lda = ta ? cs.m : cs.k;
          std::size_t ldb = tb ? cs.k : cs.n;
          auto a = random_vec(rng, (ta ? cs.k : cs.m) * lda);
          auto b = random_vec(rng, (tb ? cs.n : cs.k) * ldb);
          auto c0 = random_vec(rng, cs.m * cs.n);

          auto expect = c0;
          gemm_oracle(ta, tb, cs.m, cs.n, cs.k, 1.25f, a, lda, b, ldb, beta, expect, cs.n);

          auto run = [&] {
            auto c = c0;
            ks::gemm(ta, tb, cs.m, cs.n, cs.k, 1.25f, a.data(), lda, b.data(), ldb, beta,
                     c.data(), cs.n);
            return c;
          };

          ks::select_isa(ks::Isa::scalar);
          auto c_scalar = run();
          for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(c_scalar[i] == doctest::Approx(expect[i]).epsilon(1e-4));

          if (avx2_available()) {
            ks::select_isa(ks::Isa::avx2);
            auto c_vec = run();
            for (std::size_t i = 0; i < expect.size(); ++i)
              CHECK(c_vec[i] == doctest::Approx(expect[i]).epsilon(1e-4));
          }
          ks::select_isa(ks::detect_isa());
        }
  }
}

TEST_CASE("gemm k=0 scales C by beta only") {
  std::vector<float> c = {1.0f, 2.0f, 3.0f, 4.0f};
  ks::gemm(false, false, 2, 2, 0, 1.0f, nullptr, 1, nullptr, 1, 0.5f, c.data(), 2);
  CHECK(c[0] == doctest::Approx(0.5f));
  CHECK(c[3] == doctest::Approx(2.0f));
}

TEST_CASE("softmax_row normalizes and is shift-invariant") {
  Rng rng(15);
  auto x = random_vec(rng, 33, -4.0f, 4.0f);
  auto shifted = x;
  for (auto& v : shifted) v += 100.0f;
  ks::softmax_row(x.size(), x.data());
  ks::softmax_row(shifted.size(), shifted.data());
  CHECK(ks::vsum(x.size(), x.data()) == doctest::Approx(1.0f).epsilon(1e-5));
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(x[i] == doctest::Approx(shifted[i]).epsilon(1e-4));
}

TEST_CASE("gemm is deterministic across repeated runs (threaded path)") {
  Rng rng(16);
  const std::size_t m = 96, n = 128, k = 64; // large enough to engage threads
  auto a = random_vec(rng, m * k);
  auto b = random_vec(rng, k * n);
  std::vector<float> c1(m * n, 0.0f), c2(m * n, 0.0f);
  ks::gemm(false, false, m, n, k, 1.0f, a.data(), k, b.data(), n, 0.0f, c1.data(), n);
  ks::gemm(false, false, m, n, k, 1.0f, a.data(), k, b.data(), n, 0.0f, c2.data(), n);
  CHECK(c1 == c2);
}
