#include "saddlelab/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace saddlelab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

/// ceil with a small guard so that values computed through logarithms do
/// not round an exact integer up by one.
long ceil_guarded(double x) {
  return static_cast<long>(std::ceil(x - 1e-9));
}

struct DD {
  double hi, lo;
};

DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

DD two_prod(double a, double b) {
  double p = a * b;
  double e = std::fma(a, b, -p);
  return {p, e};
}

/// quotient with its exact remainder folded in: a/b to ~u^2
DD dd_div(double a, double b) {
  double q = a / b;
  double r = std::fma(-q, b, a);
  return {q, r / b};
}

/// f = 1 - alpha s + beta s^2 at a double-double argument, with
/// compensated products: the alpha s and beta s^2 terms reach
/// ~alpha^2/beta while the value near the root is O(1), so both the
/// argument and the summation need the extended precision.
double quartic_f_s(double alpha, double beta, DD s) {
  DD sh2 = two_prod(s.hi, s.hi);
  double s2lo = 2.0 * s.hi * s.lo + sh2.lo;
  DD p1 = two_prod(beta, sh2.hi);
  double p1lo = p1.lo + beta * s2lo;
  DD p2 = two_prod(alpha, s.hi);
  double p2lo = p2.lo + alpha * s.lo;
  DD acc = two_sum(p1.hi, -p2.hi);
  double low = acc.lo + p1lo - p2lo;
  DD r = two_sum(acc.hi, 1.0);
  low += r.lo;
  return r.hi + low;
}

/// f at t = r - 1: s = t (1 + t) carried as a double-double
double quartic_f(double alpha, double beta, double t) {
  DD t2 = two_prod(t, t);
  DD s = two_sum(t, t2.hi);
  s.lo += t2.lo;
  return quartic_f_s(alpha, beta, s);
}

double bracket_t_from_s(double s0) {
  // r - 1 where r = 1/2 + sqrt(s0 + 1/4), rationalized
  return s0 / (std::sqrt(s0 + 0.25) + 0.5);
}

}  // namespace

void BilinearParams::validate() const {
  require(finite_pos(lxy), "BilinearParams: Lxy must be > 0");
  require(finite_pos(mu_x), "BilinearParams: mu_x must be > 0");
  require(finite_pos(mu_y), "BilinearParams: mu_y must be > 0");
}

void GeneralParams::validate() const {
  require(finite_pos(mu_x), "GeneralParams: mu_x must be > 0");
  require(finite_pos(mu_y), "GeneralParams: mu_y must be > 0");
  require(std::isfinite(lxy) && lxy >= 0.0, "GeneralParams: Lxy must be >= 0");
  require(std::isfinite(lx) && lx >= mu_x, "GeneralParams: Lx must be >= mu_x");
  require(std::isfinite(ly) && ly >= mu_y, "GeneralParams: Ly must be >= mu_y");
}

RateCertificate prox_rate_q(const BilinearParams& p) {
  p.validate();

  RateCertificate c;
  c.kind = RateKind::bilinear;
  c.alpha = 4.0 * p.mu_x * p.mu_y / (p.lxy * p.lxy);

  // Smaller root of q^2 - (2+alpha) q + 1 = 0, rationalized so that both
  // the alpha -> 0 and alpha -> inf ends stay fully accurate. h^2 - 1 is
  // expanded to alpha (1 + alpha/4) to avoid the small-alpha cancellation.
  double h = 1.0 + 0.5 * c.alpha;
  double s = std::sqrt(c.alpha * (1.0 + 0.25 * c.alpha));
  c.q = 1.0 / (h + s);
  c.one_minus_q = (0.5 * c.alpha + s) / (h + s);
  c.q_lo = c.q;
  c.q_hi = c.q;
  return c;
}

RateCertificate pure_rate_q(const GeneralParams& p) {
  p.validate();
  require(p.lx > p.mu_x,
          "pure_rate_q: requires Lx > mu_x (Bx = 0 degenerates the quartic)");
  require(p.ly > p.mu_y,
          "pure_rate_q: requires Ly > mu_y (By = 0 degenerates the quartic)");
  require(p.lxy > 0.0, "pure_rate_q: requires Lxy > 0");

  RateCertificate c;
  c.kind = RateKind::general;
  c.bx = p.bx();
  c.by = p.by();
  c.alpha = p.lxy * p.lxy / (4.0 * c.bx * c.by) + p.mu_x / c.bx + p.mu_y / c.by;
  c.beta = p.mu_x * p.mu_y / (c.bx * c.by);

  // After r = 1/(1-q) the quartic reads f(r) = 1 - alpha s + beta s^2 with
  // s = r (r - 1). Work in t = r - 1: the bracket endpoints are then free
  // of cancellation and q = t / (1 + t).
  const double a = c.alpha, b = c.beta;
  double t_lo = bracket_t_from_s(0.5 * a / b);
  double t_hi = bracket_t_from_s(a / b);
  // endpoint signs at the exact endpoints s = alpha/(2 beta), alpha/beta
  double f_lo = quartic_f_s(a, b, dd_div(a, 2.0 * b));
  double f_hi = quartic_f_s(a, b, dd_div(a, b));
  if (!(f_lo < 0.0) || !(f_hi > 0.0))
    throw std::logic_error(
        "pure_rate_q: bracket endpoint signs are not (-,+); arithmetic fault");

  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (t_lo + t_hi);
    if (quartic_f(a, b, mid) < 0.0)
      t_lo = mid;
    else
      t_hi = mid;
  }
  double t = 0.5 * (t_lo + t_hi);
  c.q = t / (1.0 + t);
  c.one_minus_q = 1.0 / (1.0 + t);
  c.q_lo = 1.0 - 1.0 / (0.5 + std::sqrt(0.5 * a / b + 0.25));
  c.q_hi = 1.0 - 1.0 / (0.5 + std::sqrt(a / b + 0.25));
  return c;
}

QuarticBracket pure_quartic_bracket(const GeneralParams& p) {
  RateCertificate c = pure_rate_q(p);  // validates and computes alpha, beta
  QuarticBracket br;
  br.t_lo = bracket_t_from_s(0.5 * c.alpha / c.beta);
  br.t_hi = bracket_t_from_s(c.alpha / c.beta);
  br.f_lo = quartic_f_s(c.alpha, c.beta, dd_div(c.alpha, 2.0 * c.beta));
  br.f_hi = quartic_f_s(c.alpha, c.beta, dd_div(c.alpha, c.beta));
  return br;
}

double bilinear_quadratic_residual(const RateCertificate& c) {
  return 1.0 - (2.0 + c.alpha) * c.q + c.q * c.q;
}

double pure_quartic_residual(const RateCertificate& c) {
  // (1-q)^4 - alpha q (1-q)^2 + beta q^2, identical to the expanded quartic
  const double q = c.q, w = c.one_minus_q;
  return w * w * w * w - c.alpha * q * w * w + c.beta * q * q;
}

double pure_quartic_residual_scale(const RateCertificate& c) {
  return std::max({1.0, c.alpha, c.beta});
}

long lower_iter_count(const RateCertificate& c, double eps, double gap0) {
  if (!(eps > 0.0)) throw std::invalid_argument("lower_iter_count: eps must be > 0");
  if (!(gap0 > 0.0)) throw std::invalid_argument("lower_iter_count: gap0 must be > 0");
  if (!(c.q > 0.0 && c.q < 1.0))
    throw std::invalid_argument("lower_iter_count: q must lie in (0,1)");
  if (gap0 <= eps) return 0;

  double log_inv_q = -std::log1p(-c.one_minus_q);
  double k = std::log(gap0 / eps) / log_inv_q;
  if (c.kind == RateKind::general) k *= 0.5;
  return ceil_guarded(k);
}

namespace {

/// 2 log_q(z) (+offset), clamped below at `floor_n`; vacuous when z >= 1.
int dim_from_log(double q, double z, double offset, int floor_n) {
  double lq = std::log(q);
  double val = 2.0 * std::log(z) / lq + offset;
  long n = ceil_guarded(val);
  return static_cast<int>(std::max<long>(n, floor_n));
}

}  // namespace

int min_dim_bilinear(const RateCertificate& c, int k_max) {
  int n = dim_from_log(c.q, c.alpha / (4.0 * std::sqrt(2.0)), 0.0, 2);
  return std::max(n, 4 * k_max);
}

int min_dim_pure_lemma(const RateCertificate& c) {
  return dim_from_log(c.q, c.beta / (4.0 * std::sqrt(2.0) * (7.0 + c.alpha)),
                      2.0, 2);
}

int min_dim_pure_theorem(const RateCertificate& c) {
  return dim_from_log(c.q, (7.0 + c.alpha) / c.beta, 0.0, 2);
}

int min_dim_pure(const RateCertificate& c, int k_max) {
  int n = std::max(min_dim_pure_lemma(c), min_dim_pure_theorem(c));
  return std::max(n, 2 * k_max);
}

}  // namespace saddlelab
