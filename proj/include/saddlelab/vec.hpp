#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace saddlelab {

using Vec = std::vector<double>;

inline Vec zeros(int n) { return Vec(static_cast<std::size_t>(n), 0.0); }

/// i-th canonical basis vector (0-based index).
inline Vec unit(int n, int i) {
  Vec e = zeros(n);
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double nrm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double nrm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

/// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vec scaled(const Vec& x, double alpha) {
  Vec r = x;
  for (double& v : r) v *= alpha;
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline void require_dim(const Vec& v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(n) + ", got " +
                                std::to_string(v.size()));
}

}  // namespace saddlelab
