#include "saddlelab/instances.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "saddlelab/solutions.hpp"

namespace saddlelab {

namespace {

void require_min_dim(int n, int needed, const char* what) {
  if (n < needed)
    throw std::invalid_argument(std::string(what) + ": n = " +
                                std::to_string(n) +
                                " is below the required minimum n = " +
                                std::to_string(needed));
}

}  // namespace

BilinearInstance::BilinearInstance(const BilinearParams& p, int n, int k_max)
    : p_(p), n_(n), cert_(prox_rate_q(p)) {
  if (n < 1) throw std::invalid_argument("BilinearInstance: n must be >= 1");
  if (k_max > 0)
    require_min_dim(n, min_dim_bilinear(cert_, k_max), "BilinearInstance");
  b_ = zeros(n);
  b_[0] = -p_.lxy * p_.lxy / (4.0 * p_.mu_x);
}

double BilinearInstance::value(const Vec& x, const Vec& y) const {
  require_dim(x, n_, "BilinearInstance::value x");
  require_dim(y, n_, "BilinearInstance::value y");
  return 0.5 * p_.mu_x * dot(x, x) + 0.5 * p_.lxy * dot(x, apply_A(y)) -
         0.5 * p_.mu_y * dot(y, y) - dot(b_, y);
}

void BilinearInstance::grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const {
  require_dim(x, n_, "BilinearInstance::grad x");
  require_dim(y, n_, "BilinearInstance::grad y");
  gx = apply_A(y);
  for (std::size_t i = 0; i < gx.size(); ++i)
    gx[i] = p_.mu_x * x[i] + 0.5 * p_.lxy * gx[i];
  gy = apply_A(x);
  for (std::size_t i = 0; i < gy.size(); ++i)
    gy[i] = 0.5 * p_.lxy * gy[i] - p_.mu_y * y[i] - b_[i];
}

Vec BilinearInstance::coupling_apply(const Vec& v) const {
  require_dim(v, n_, "BilinearInstance::coupling_apply");
  return scaled(apply_A(v), 0.5 * p_.lxy);
}

Vec BilinearInstance::prox_f(double gamma, const Vec& v) const {
  if (!(gamma > 0.0))
    throw std::invalid_argument("prox_f: step must be positive");
  require_dim(v, n_, "BilinearInstance::prox_f");
  return scaled(v, 1.0 / (1.0 + gamma * p_.mu_x));
}

Vec BilinearInstance::prox_g(double sigma, const Vec& u) const {
  if (!(sigma > 0.0))
    throw std::invalid_argument("prox_g: step must be positive");
  require_dim(u, n_, "BilinearInstance::prox_g");
  Vec r = u;
  axpy(-sigma, b_, r);
  return scaled(r, 1.0 / (1.0 + sigma * p_.mu_y));
}

double BilinearInstance::primal_value(const Vec& x) const {
  require_dim(x, n_, "BilinearInstance::primal_value");
  // max_y attained at y = ((Lxy/2) A x - b) / mu_y
  Vec w = apply_A(x);
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = 0.5 * p_.lxy * w[i] - b_[i];
  return 0.5 * p_.mu_x * dot(x, x) + 0.5 * dot(w, w) / p_.mu_y;
}

double BilinearInstance::dual_value(const Vec& y) const {
  require_dim(y, n_, "BilinearInstance::dual_value");
  double c = p_.lxy * p_.lxy / (4.0 * p_.mu_x);
  return -0.5 * (c * dot(y, apply_A2(y)) + p_.mu_y * dot(y, y)) - dot(b_, y);
}

double BilinearInstance::duality_gap(const Vec& x, const Vec& y) const {
  return primal_value(x) - dual_value(y);
}

PureInstance::PureInstance(const GeneralParams& p, int n, int k_max)
    : p_(p), n_(n), cert_(pure_rate_q(p)) {
  if (n < 2) throw std::invalid_argument("PureInstance: n must be >= 2");
  if (k_max > 0)
    require_min_dim(n, min_dim_pure(cert_, k_max), "PureInstance");
  bhat_ = make_bhat(cert_, n);
  init_from_bhat();
}

PureInstance::PureInstance(const GeneralParams& p, int n, const Vec& bhat)
    : p_(p), n_(n), cert_(pure_rate_q(p)), bhat_(bhat) {
  if (n < 2) throw std::invalid_argument("PureInstance: n must be >= 2");
  require_dim(bhat_, n_, "PureInstance: bhat");
  init_from_bhat();
}

void PureInstance::init_from_bhat() {
  b_ = scaled(apply_Ainv(bhat_), 2.0 * cert_.bx * cert_.by / p_.lxy);
}

double PureInstance::value(const Vec& x, const Vec& y) const {
  require_dim(x, n_, "PureInstance::value x");
  require_dim(y, n_, "PureInstance::value y");
  double qx = 0.5 * (cert_.bx * dot(x, apply_A2(x)) + p_.mu_x * dot(x, x));
  double qy = 0.5 * (cert_.by * dot(y, apply_A2(y)) + p_.mu_y * dot(y, y));
  return qx + 0.5 * p_.lxy * dot(x, apply_A(y)) - qy - dot(b_, y);
}

void PureInstance::grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const {
  require_dim(x, n_, "PureInstance::grad x");
  require_dim(y, n_, "PureInstance::grad y");
  gx = apply_shifted_A2(cert_.bx, p_.mu_x, x);
  axpy(0.5 * p_.lxy, apply_A(y), gx);
  gy = apply_shifted_A2(cert_.by, p_.mu_y, y);
  for (std::size_t i = 0; i < gy.size(); ++i) gy[i] = -gy[i] - b_[i];
  axpy(0.5 * p_.lxy, apply_A(x), gy);
}

Vec PureInstance::coupling_apply(const Vec& v) const {
  require_dim(v, n_, "PureInstance::coupling_apply");
  return scaled(apply_A(v), 0.5 * p_.lxy);
}

double PureInstance::primal_value(const Vec& x) const {
  require_dim(x, n_, "PureInstance::primal_value");
  Vec w = apply_A(x);
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = 0.5 * p_.lxy * w[i] - b_[i];
  Vec yhat = solve_tridiag(cert_.by, p_.mu_y, w);
  double qx = 0.5 * (cert_.bx * dot(x, apply_A2(x)) + p_.mu_x * dot(x, x));
  return qx + 0.5 * dot(w, yhat);
}

double PureInstance::dual_value(const Vec& y) const {
  require_dim(y, n_, "PureInstance::dual_value");
  Vec u = scaled(apply_A(y), 0.5 * p_.lxy);
  Vec xhat = solve_tridiag(cert_.bx, p_.mu_x, u);
  double qy = 0.5 * (cert_.by * dot(y, apply_A2(y)) + p_.mu_y * dot(y, y));
  return -0.5 * dot(u, xhat) - qy - dot(b_, y);
}

double PureInstance::duality_gap(const Vec& x, const Vec& y) const {
  return primal_value(x) - dual_value(y);
}

namespace {

ScalingReduction make_reduction(double rx, double ry, double eps,
                                const Vec& xstar, const Vec& ystar) {
  if (!(rx > 0.0 && ry > 0.0 && eps > 0.0))
    throw std::invalid_argument("scaled instance: rx, ry, eps must be > 0");
  double nx = nrm2(xstar);
  double ny = nrm2(ystar);
  if (nx == 0.0 || ny == 0.0)
    throw std::invalid_argument("scaled instance: degenerate base saddle");
  ScalingReduction s;
  s.eps = eps;
  s.rx = rx;
  s.ry = ry;
  s.mu_x = 64.0 * eps / (rx * rx);
  s.mu_y = 64.0 * eps / (ry * ry);
  s.c = nx / rx;
  s.d = ny / ry;
  s.a = std::min(1.0 / (s.c * s.c), 1.0 / (s.d * s.d));
  return s;
}

}  // namespace

ScaledInstance<PureInstance> build_scaled_cc_general(double lx, double ly,
                                                     double lxy, int n,
                                                     double rx, double ry,
                                                     double eps) {
  GeneralParams p;
  p.lx = lx;
  p.ly = ly;
  p.lxy = lxy;
  p.mu_x = 64.0 * eps / (rx * rx);
  p.mu_y = 64.0 * eps / (ry * ry);
  PureInstance base(p, n);
  SaddlePoint star = exact_saddle(base);
  ScalingReduction s = make_reduction(rx, ry, eps, star.x, star.y);
  return ScaledInstance<PureInstance>(std::move(base), s, star.x, star.y);
}

ScaledInstance<BilinearInstance> build_scaled_cc_bilinear(double lxy, int n,
                                                          double rx, double ry,
                                                          double eps) {
  BilinearParams p;
  p.lxy = lxy;
  p.mu_x = 64.0 * eps / (rx * rx);
  p.mu_y = 64.0 * eps / (ry * ry);
  BilinearInstance base(p, n);
  SaddlePoint star = exact_saddle(base);
  ScalingReduction s = make_reduction(rx, ry, eps, star.x, star.y);
  return ScaledInstance<BilinearInstance>(std::move(base), s, star.x, star.y);
}

double cc_lower_bound_general(double lx, double ly, double lxy, double rx,
                              double ry, double eps) {
  return std::sqrt(lx * rx * rx / eps) + lxy * rx * ry / eps +
         std::sqrt(ly * ry * ry / eps);
}

double cc_lower_bound_bilinear(double lxy, double rx, double ry, double eps) {
  return lxy * rx * ry / eps;
}

}  // namespace saddlelab
