#pragma once

#include <algorithm>

namespace saddlelab {

/// Constants of the bilinear problem class B(Lxy, mu_x, mu_y).
struct BilinearParams {
  double lxy = 0.0;
  double mu_x = 0.0;
  double mu_y = 0.0;

  /// Throws std::invalid_argument unless all three constants are
  /// strictly positive.
  void validate() const;

  /// coupling condition number Lxy^2 / (mu_x * mu_y)
  double kappa_xy() const { return lxy * lxy / (mu_x * mu_y); }
};

/// Constants of the general problem class F(Lx, Ly, Lxy, mu_x, mu_y).
struct GeneralParams {
  double lx = 0.0;
  double ly = 0.0;
  double lxy = 0.0;
  double mu_x = 0.0;
  double mu_y = 0.0;

  /// mu_x, mu_y > 0, Lxy >= 0, Lx >= mu_x, Ly >= mu_y.
  void validate() const;

  /// Curvature coefficients of the worst-case quadratic blocks.
  double bx() const { return 0.25 * (lx - mu_x); }
  double by() const { return 0.25 * (ly - mu_y); }

  double l_max() const { return std::max({lx, ly, lxy}); }
  double mu_min() const { return std::min(mu_x, mu_y); }
};

enum class RateKind { bilinear, general };

/// Per-round contraction floor q together with the constants it was
/// derived from and the analytic bracket it was located in.
struct RateCertificate {
  RateKind kind = RateKind::bilinear;
  double alpha = 0.0;
  double beta = 0.0;  // general kind only
  double bx = 0.0;    // general kind only
  double by = 0.0;    // general kind only
  double q = 0.0;
  double one_minus_q = 0.0;  // kept separately: full precision when q -> 1
  double q_lo = 0.0;
  double q_hi = 0.0;
};

/// Contraction rate for the bilinear class with proximal oracles.
/// q is the smaller root of 1 - (2 + alpha) q + q^2 = 0 with
/// alpha = 4 mu_x mu_y / Lxy^2. Rejects Lxy = 0.
RateCertificate prox_rate_q(const BilinearParams& p);

/// Contraction rate for the general class: the quartic
/// 1 - (4+a) q + (6+2a+b) q^2 - (4+a) q^3 + q^4 = 0 is solved by 200
/// bisection steps after the change of variable r = 1/(1-q), over the
/// analytic sign-changing bracket. Requires Lx > mu_x, Ly > mu_y, Lxy > 0.
RateCertificate pure_rate_q(const GeneralParams& p);

/// Bisection bracket of the transformed quartic in t = r - 1 = q/(1-q),
/// with the endpoint values of f(t) = 1 - alpha s + beta s^2, s = t(1+t).
struct QuarticBracket {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double f_lo = 0.0;  // analytically 1 - alpha^2/(4 beta) < 0
  double f_hi = 0.0;  // analytically exactly 1
};
QuarticBracket pure_quartic_bracket(const GeneralParams& p);

/// Residual of the characteristic equation at the certified q.
double bilinear_quadratic_residual(const RateCertificate& c);
double pure_quartic_residual(const RateCertificate& c);

/// Scale max(1, alpha, beta) against which the quartic residual is
/// meaningful in double precision.
double pure_quartic_residual_scale(const RateCertificate& c);

/// Iterations needed before the geometric floor q^k (bilinear) or q^{2k}
/// (general) can push gap0 below eps. Returns 0 when gap0 <= eps.
long lower_iter_count(const RateCertificate& c, double eps, double gap0);

/// Dimension floor for a bilinear worst-case instance driven for k_max
/// rounds: max{2 log_q(alpha / (4 sqrt 2)), 4 k_max}.
int min_dim_bilinear(const RateCertificate& c, int k_max);

/// The two published dimension requirements for the general instance
/// disagree; both are exposed and callers take the max.
int min_dim_pure_lemma(const RateCertificate& c);    // 2 log_q(beta/(4 sqrt2 (7+alpha))) + 2
int min_dim_pure_theorem(const RateCertificate& c);  // 2 log_q((7+alpha)/beta)
int min_dim_pure(const RateCertificate& c, int k_max);

}  // namespace saddlelab
