#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace tul {

/// Dense row-major float matrix. Rows are contiguous.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, float fill = 0.0f) : rows(r), cols(c), v(r * c, fill) {}

  float* data() { return v.data(); }
  const float* data() const { return v.data(); }
  float* row(std::size_t i) { return v.data() + i * cols; }
  const float* row(std::size_t i) const { return v.data() + i * cols; }
  std::span<float> row_span(std::size_t i) { return {row(i), cols}; }
  std::span<const float> row_span(std::size_t i) const { return {row(i), cols}; }

  float& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  float at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }

  std::size_t size() const { return v.size(); }
  bool empty() const { return v.empty(); }

  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    v.assign(r * c, 0.0f);
  }
  void zero() { std::fill(v.begin(), v.end(), 0.0f); }
};

using Vec = std::vector<float>;

inline void zero(Vec& x) { std::fill(x.begin(), x.end(), 0.0f); }

} // namespace tul
