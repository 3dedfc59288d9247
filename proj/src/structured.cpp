#include "saddlelab/structured.hpp"

#include <cmath>
#include <stdexcept>

#include "saddlelab/rng.hpp"

namespace saddlelab {

Vec apply_A(const Vec& v) {
  const int n = static_cast<int>(v.size());
  Vec r(v.size());
  for (int i = 0; i < n; ++i) {
    // row i (0-based): +v[n-1-i], -v[n-i] when present
    double x = v[static_cast<std::size_t>(n - 1 - i)];
    if (i >= 1) x -= v[static_cast<std::size_t>(n - i)];
    r[static_cast<std::size_t>(i)] = x;
  }
  return r;
}

Vec apply_A2(const Vec& v) {
  const int n = static_cast<int>(v.size());
  Vec r(v.size());
  if (n == 1) {
    r[0] = v[0];
    return r;
  }
  r[0] = v[0] - v[1];
  for (int i = 1; i < n - 1; ++i)
    r[static_cast<std::size_t>(i)] = -v[static_cast<std::size_t>(i - 1)] +
                                     2.0 * v[static_cast<std::size_t>(i)] -
                                     v[static_cast<std::size_t>(i + 1)];
  r[static_cast<std::size_t>(n - 1)] =
      -v[static_cast<std::size_t>(n - 2)] + 2.0 * v[static_cast<std::size_t>(n - 1)];
  return r;
}

Vec apply_A4(const Vec& v) { return apply_A2(apply_A2(v)); }

Vec apply_Ainv(const Vec& v) {
  const int n = static_cast<int>(v.size());
  Vec r(v.size());
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += v[static_cast<std::size_t>(j)];
    // prefix sum through j lands at row n-1-j
    r[static_cast<std::size_t>(n - 1 - j)] = acc;
  }
  return r;
}

Vec apply_shifted_A2(double c, double d, const Vec& v) {
  Vec r = apply_A2(v);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = c * r[i] + d * v[i];
  return r;
}

Vec apply_quartic_op(double alpha, double beta, const Vec& v) {
  Vec a2 = apply_A2(v);
  Vec a4 = apply_A2(a2);
  for (std::size_t i = 0; i < v.size(); ++i)
    a4[i] += alpha * a2[i] + beta * v[i];
  return a4;
}

namespace {

/// Thomas elimination for (c A^2 + d I) v = w; assumes c > 0, d >= 0.
Vec thomas_shifted_A2(double c, double d, const Vec& w) {
  const int n = static_cast<int>(w.size());
  const double diag0 = c + d;
  const double diag = 2.0 * c + d;
  const double off = -c;

  Vec cp(static_cast<std::size_t>(n), 0.0);
  Vec dp(static_cast<std::size_t>(n), 0.0);
  cp[0] = off / diag0;
  dp[0] = w[0] / diag0;
  for (int i = 1; i < n; ++i) {
    double den = diag - off * cp[static_cast<std::size_t>(i - 1)];
    cp[static_cast<std::size_t>(i)] = off / den;
    dp[static_cast<std::size_t>(i)] =
        (w[static_cast<std::size_t>(i)] -
         off * dp[static_cast<std::size_t>(i - 1)]) /
        den;
  }
  Vec v(static_cast<std::size_t>(n));
  v[static_cast<std::size_t>(n - 1)] = dp[static_cast<std::size_t>(n - 1)];
  for (int i = n - 2; i >= 0; --i)
    v[static_cast<std::size_t>(i)] = dp[static_cast<std::size_t>(i)] -
                                     cp[static_cast<std::size_t>(i)] *
                                         v[static_cast<std::size_t>(i + 1)];
  return v;
}

}  // namespace

Vec solve_tridiag(double c, double d, const Vec& w) {
  if (!(c >= 0.0) || !std::isfinite(c) || !std::isfinite(d))
    throw std::invalid_argument("solve_tridiag: requires c >= 0");
  if (c == 0.0) {
    if (!(d > 0.0))
      throw std::invalid_argument("solve_tridiag: c = 0 requires d > 0");
    return scaled(w, 1.0 / d);
  }
  if (!(d >= 0.0))
    throw std::invalid_argument("solve_tridiag: requires d >= 0");
  if (w.size() == 1) {
    Vec v(1);
    v[0] = w[0] / (c + d);
    return v;
  }

  Vec v = thomas_shifted_A2(c, d, w);
  // one refinement pass
  Vec r = apply_shifted_A2(c, d, v);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = w[i] - r[i];
  Vec dv = thomas_shifted_A2(c, d, r);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += dv[i];
  return v;
}

Vec solve_quartic_op(double alpha, double beta, const Vec& w) {
  if (!(alpha >= 0.0) || !(beta >= 0.0))
    throw std::invalid_argument("solve_quartic_op: requires alpha, beta >= 0");
  double disc = alpha * alpha - 4.0 * beta;
  if (disc < 0.0)
    throw std::invalid_argument(
        "solve_quartic_op: alpha^2 < 4 beta, operator does not factor");
  double r1 = 0.5 * (alpha + std::sqrt(disc));
  double r2 = (r1 > 0.0) ? beta / r1 : 0.0;
  if (r1 == 0.0 && beta == 0.0) {
    // alpha = beta = 0: plain A^4, two A^2 solves
    return solve_tridiag(1.0, 0.0, solve_tridiag(1.0, 0.0, w));
  }
  return solve_tridiag(1.0, r2, solve_tridiag(1.0, r1, w));
}

int support_prefix(const Vec& v, double tol) {
  if (!(tol >= 0.0))
    throw std::invalid_argument("support_prefix: tol must be >= 0");
  for (int i = static_cast<int>(v.size()); i >= 1; --i)
    if (std::fabs(v[static_cast<std::size_t>(i - 1)]) > tol) return i;
  return 0;
}

double span_tolerance(const Vec& v) {
  return 1e-11 * std::max(1.0, nrm_inf(v));
}

int support_prefix(const Vec& v) { return support_prefix(v, span_tolerance(v)); }

double a2_eigenvalue_max(int n) {
  const double pi = 3.14159265358979323846;
  return 2.0 + 2.0 * std::cos(2.0 * pi / (2.0 * n + 1.0));
}

double a2_eigenvalue_min(int n) {
  const double pi = 3.14159265358979323846;
  return 2.0 - 2.0 * std::cos(pi / (2.0 * n + 1.0));
}

double power_iteration(const std::function<Vec(const Vec&)>& op, int n,
                       int iters, std::uint64_t seed) {
  Rng rng(seed);
  Vec v = rng.gaussian_vec(n);
  double nv = nrm2(v);
  for (double& x : v) x /= nv;
  double est = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = op(v);
    est = nrm2(w);
    if (est == 0.0) return 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / est;
  }
  // Rayleigh quotient of the symmetrized square gives |lambda|_max
  Vec w = op(v);
  return std::sqrt(dot(w, w) / dot(v, v));
}

double inverse_power_iteration_shifted_A2(double c, double d, int n, int iters,
                                          std::uint64_t seed) {
  Rng rng(seed);
  Vec v = rng.gaussian_vec(n);
  double nv = nrm2(v);
  for (double& x : v) x /= nv;
  for (int it = 0; it < iters; ++it) {
    Vec w = solve_tridiag(c, d, v);
    double nw = nrm2(w);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
  }
  Vec mv = apply_shifted_A2(c, d, v);
  return dot(v, mv) / dot(v, v);
}

Vec StructuredOperator::apply(const Vec& v) const {
  switch (kind) {
    case OpKind::A:
      return apply_A(v);
    case OpKind::A2:
      return apply_A2(v);
    case OpKind::A4:
      return apply_A4(v);
    case OpKind::AInv:
      return apply_Ainv(v);
    case OpKind::ShiftedA2:
      return apply_shifted_A2(c0, c1, v);
    case OpKind::QuarticOp:
      return apply_quartic_op(c0, c1, v);
  }
  throw std::logic_error("StructuredOperator: unknown kind");
}

}  // namespace saddlelab
