#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

// Hot loops get an AVX2 clone picked at load time. AVX2 without FMA keeps
// every elementwise result bit-identical to the baseline build.
#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__) && defined(__linux__)
#define DEFHYPER_HOT __attribute__((target_clones("avx2", "default")))
#else
#define DEFHYPER_HOT
#endif

namespace defhyper {

// Dense row-major matrix of doubles. Vectors are rows x 1 matrices.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  std::size_t size() const { return data.size(); }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

  bool operator==(const Matrix&) const = default;
};

// y += W x  (W is rows x cols, x has cols entries)
// Four rows share one pass over x; each row still sums left to right, so the
// result does not depend on the blocking.
inline void gemv_add(const Matrix& w, const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 4 <= w.rows; r += 4) {
    const double *w0 = w.row(r), *w1 = w.row(r + 1), *w2 = w.row(r + 2), *w3 = w.row(r + 3);
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) {
      const double xc = x[c];
      a0 += w0[c] * xc;
      a1 += w1[c] * xc;
      a2 += w2[c] * xc;
      a3 += w3[c] * xc;
    }
    y[r] += a0;
    y[r + 1] += a1;
    y[r + 2] += a2;
    y[r + 3] += a3;
  }
  for (; r < w.rows; ++r) {
    const double* wr = w.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// x_grad += W^T dy
inline void gemv_t_add(const Matrix& w, const double* dy, double* x_grad) {
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double* wr = w.row(r);
    const double g = dy[r];
    for (std::size_t c = 0; c < w.cols; ++c) x_grad[c] += wr[c] * g;
  }
}

// G += dy x^T
inline void outer_add(Matrix& g, const double* dy, const double* x) {
  for (std::size_t r = 0; r < g.rows; ++r) {
    double* gr = g.row(r);
    const double d = dy[r];
    for (std::size_t c = 0; c < g.cols; ++c) gr[c] += d * x[c];
  }
}

}  // namespace defhyper
