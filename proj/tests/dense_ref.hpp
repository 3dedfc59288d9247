#pragma once

// Dense reference implementations used only by tests: independent of the
// structured kernels they cross-check.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "saddlelab/vec.hpp"

namespace saddlelab::testref {

using Mat = std::vector<Vec>;  // row-major

inline Mat zeros_mat(int n) { return Mat(static_cast<std::size_t>(n), zeros(n)); }

/// A from its defining pattern: A[i, n+1-i] = 1, A[i, n+2-i] = -1 (1-based).
inline Mat dense_A(int n) {
  Mat a = zeros_mat(n);
  for (int i = 1; i <= n; ++i) {
    int j1 = n + 1 - i;
    a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j1 - 1)] = 1.0;
    int j2 = n + 2 - i;
    if (j2 <= n)
      a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j2 - 1)] = -1.0;
  }
  return a;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  int n = static_cast<int>(a.size());
  Mat c = zeros_mat(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double aik = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j)
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            aik * b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }
  return c;
}

inline Vec matvec(const Mat& a, const Vec& v) {
  int n = static_cast<int>(a.size());
  Vec r = zeros(n);
  for (int i = 0; i < n; ++i)
    r[static_cast<std::size_t>(i)] = dot(a[static_cast<std::size_t>(i)], v);
  return r;
}

inline Mat add_scaled_identity(const Mat& a, double c, double d) {
  int n = static_cast<int>(a.size());
  Mat r = a;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *= c;
    r[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += d;
  }
  return r;
}

/// Gaussian elimination with partial pivoting.
inline Vec dense_solve(Mat a, Vec b) {
  int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          std::fabs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
        piv = r;
    std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
    std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
    double d = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    if (d == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    for (int r = col + 1; r < n; ++r) {
      double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  Vec x = zeros(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j)
      s -= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
           x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] =
        s / a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  }
  return x;
}

}  // namespace saddlelab::testref
