#include "saddlelab/solutions.hpp"

#include <cmath>
#include <stdexcept>

#include "saddlelab/structured.hpp"

namespace saddlelab {

namespace {

void fill_residuals(SaddlePoint& s, const Vec& gx, const Vec& gy) {
  s.grad_residual_x = nrm2(gx);
  s.grad_residual_y = nrm2(gy);
}

}  // namespace

SaddlePoint exact_saddle(const BilinearInstance& inst) {
  const auto& p = inst.params();
  const double alpha = inst.rate().alpha;
  SaddlePoint s;
  s.y = solve_tridiag(1.0, alpha, unit(inst.dim(), 0));
  s.x = scaled(apply_A(s.y), -0.5 * p.lxy / p.mu_x);
  Vec gx, gy;
  inst.grad(s.x, s.y, gx, gy);
  fill_residuals(s, gx, gy);
  return s;
}

SaddlePoint exact_saddle(const PureInstance& inst) {
  const auto& p = inst.params();
  const auto& c = inst.rate();
  SaddlePoint s;
  s.x = solve_quartic_op(c.alpha, c.beta, inst.bhat());
  Vec w = scaled(apply_A(s.x), 0.5 * p.lxy);
  axpy(-1.0, inst.b(), w);
  s.y = solve_tridiag(c.by, p.mu_y, w);
  Vec gx, gy;
  inst.grad(s.x, s.y, gx, gy);
  fill_residuals(s, gx, gy);
  return s;
}

ApproxSolution approx_y_star(double alpha, int n) {
  if (!(alpha > 0.0)) throw std::invalid_argument("approx_y_star: alpha > 0");
  if (n < 1) throw std::invalid_argument("approx_y_star: n >= 1");
  BilinearParams p{2.0, alpha, 1.0};  // 4 mu_x mu_y / Lxy^2 = alpha
  RateCertificate c = prox_rate_q(p);
  ApproxSolution a;
  a.q = c.q;
  a.v.resize(static_cast<std::size_t>(n));
  double pw = 1.0;
  for (int i = 0; i < n; ++i) {
    pw *= c.q;
    a.v[static_cast<std::size_t>(i)] = pw / c.one_minus_q;
  }
  a.bound = pw * c.q / (alpha * c.one_minus_q);
  return a;
}

Vec make_bhat(const RateCertificate& cert, int n) {
  if (cert.kind != RateKind::general)
    throw std::invalid_argument("make_bhat: general-kind certificate required");
  const double q = cert.q, a = cert.alpha, b = cert.beta;
  Vec bhat = zeros(n);
  bhat[0] = (2.0 + a + b) * q - (3.0 + a) * q * q + q * q * q;
  if (n >= 2) bhat[1] = q - 1.0;
  return bhat;
}

ApproxSolution approx_x_star(const RateCertificate& cert, int n) {
  if (cert.kind != RateKind::general)
    throw std::invalid_argument(
        "approx_x_star: general-kind certificate required");
  if (n < 1) throw std::invalid_argument("approx_x_star: n >= 1");
  ApproxSolution a;
  a.q = cert.q;
  a.v.resize(static_cast<std::size_t>(n));
  double pw = 1.0;
  for (int i = 0; i < n; ++i) {
    pw *= cert.q;
    a.v[static_cast<std::size_t>(i)] = pw;
  }
  a.bound = (7.0 + cert.alpha) / cert.beta * pw;
  return a;
}

double projected_min_distance(const Vec& vstar, int k) {
  const int n = static_cast<int>(vstar.size());
  if (k < 0 || k > n)
    throw std::invalid_argument("projected_min_distance: 0 <= k <= n");
  double s = 0.0;
  for (int i = k; i < n; ++i) {
    double v = vstar[static_cast<std::size_t>(i)];
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace saddlelab
