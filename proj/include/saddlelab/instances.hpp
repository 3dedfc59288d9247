#pragma once

#include "saddlelab/params.hpp"
#include "saddlelab/rotation.hpp"
#include "saddlelab/structured.hpp"
#include "saddlelab/vec.hpp"

namespace saddlelab {

/// Worst-case member of B(Lxy, mu_x, mu_y):
///   F(x,y) = mu_x/2 ||x||^2 + Lxy/2 x^T A y - mu_y/2 ||y||^2 - b^T y,
/// with b = -(Lxy^2 / (4 mu_x)) e_1. All oracles are matrix-free.
class BilinearInstance {
 public:
  /// k_max > 0 additionally enforces the dimension floor for a k_max-round
  /// experiment and throws with the needed n otherwise.
  BilinearInstance(const BilinearParams& p, int n, int k_max = 0);

  int dim() const { return n_; }
  const BilinearParams& params() const { return p_; }
  const RateCertificate& rate() const { return cert_; }
  const Vec& b() const { return b_; }

  double value(const Vec& x, const Vec& y) const;
  void grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const;

  /// (Lxy/2) A v — the instance's coupling operator (A symmetric).
  Vec coupling_apply(const Vec& v) const;

  /// prox of f = mu_x/2 ||.||^2: v / (1 + gamma mu_x)
  Vec prox_f(double gamma, const Vec& v) const;
  /// prox of g = mu_y/2 ||.||^2 + b^T .: (u - sigma b) / (1 + sigma mu_y)
  Vec prox_g(double sigma, const Vec& u) const;

  double primal_value(const Vec& x) const;  // max_y F(x, y)
  double dual_value(const Vec& y) const;    // min_x F(x, y)
  double duality_gap(const Vec& x, const Vec& y) const;

 private:
  BilinearParams p_;
  int n_;
  RateCertificate cert_;
  Vec b_;
};

/// Worst-case member of F(Lx, Ly, Lxy, mu_x, mu_y):
///   F(x,y) = 1/2 x^T (Bx A^2 + mu_x I) x + Lxy/2 x^T A y
///          - 1/2 y^T (By A^2 + mu_y I) y - b^T y,
/// with b = (2 Bx By / Lxy) A^{-1} bhat and bhat supported on {1, 2}.
class PureInstance {
 public:
  PureInstance(const GeneralParams& p, int n, int k_max = 0);
  /// Same quadratic family with a caller-supplied bhat (support need not
  /// be {1,2}); used for degenerate-forcing checks.
  PureInstance(const GeneralParams& p, int n, const Vec& bhat);

  int dim() const { return n_; }
  const GeneralParams& params() const { return p_; }
  const RateCertificate& rate() const { return cert_; }
  const Vec& b() const { return b_; }
  const Vec& bhat() const { return bhat_; }

  double value(const Vec& x, const Vec& y) const;
  void grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const;
  Vec coupling_apply(const Vec& v) const;

  double primal_value(const Vec& x) const;
  double dual_value(const Vec& y) const;
  double duality_gap(const Vec& x, const Vec& y) const;

 private:
  void init_from_bhat();

  GeneralParams p_;
  int n_;
  RateCertificate cert_;
  Vec bhat_;
  Vec b_;
};

/// F_{U,V}(x, y) = F(Ux, Vy) for orthogonal U, V. Gradients follow by the
/// chain rule; primal/dual values and the gap are invariant under the
/// inner reparameterization.
template <class Base>
class RotatedInstance {
 public:
  RotatedInstance(Base base, Rotation u, Rotation v)
      : base_(std::move(base)), u_(std::move(u)), v_(std::move(v)) {}

  int dim() const { return base_.dim(); }
  const Base& base() const { return base_; }
  const Rotation& u() const { return u_; }
  const Rotation& v() const { return v_; }

  double value(const Vec& x, const Vec& y) const {
    return base_.value(u_.apply(x), v_.apply(y));
  }

  void grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const {
    Vec bx, by;
    base_.grad(u_.apply(x), v_.apply(y), bx, by);
    gx = u_.apply_transpose(bx);
    gy = v_.apply_transpose(by);
  }

  double primal_value(const Vec& x) const {
    return base_.primal_value(u_.apply(x));
  }
  double dual_value(const Vec& y) const {
    return base_.dual_value(v_.apply(y));
  }
  double duality_gap(const Vec& x, const Vec& y) const {
    return base_.duality_gap(u_.apply(x), v_.apply(y));
  }

  /// Saddle of the rotated problem from the saddle of the base problem.
  Vec pull_back_x(const Vec& xstar) const { return u_.apply_transpose(xstar); }
  Vec pull_back_y(const Vec& ystar) const { return v_.apply_transpose(ystar); }

 private:
  Base base_;
  Rotation u_;
  Rotation v_;
};

/// Scaling constants for the reduction to the merely convex-concave
/// classes: the base instance is rebuilt with mu = 64 eps / R^2 and then
/// F_eps(x,y) = a F(c x, d y).
struct ScalingReduction {
  double eps = 0.0;
  double rx = 0.0;
  double ry = 0.0;
  double mu_x = 0.0;  // 64 eps / rx^2
  double mu_y = 0.0;  // 64 eps / ry^2
  double c = 0.0;     // ||x*_base|| / rx
  double d = 0.0;     // ||y*_base|| / ry
  double a = 0.0;     // min(c^-2, d^-2)
};

template <class Base>
class ScaledInstance {
 public:
  ScaledInstance(Base base, const ScalingReduction& s, Vec xstar_base,
                 Vec ystar_base)
      : base_(std::move(base)),
        s_(s),
        xstar_(scaled(xstar_base, 1.0 / s.c)),
        ystar_(scaled(ystar_base, 1.0 / s.d)) {}

  int dim() const { return base_.dim(); }
  const Base& base() const { return base_; }
  const ScalingReduction& reduction() const { return s_; }

  double value(const Vec& x, const Vec& y) const {
    return s_.a * base_.value(scaled(x, s_.c), scaled(y, s_.d));
  }
  void grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const {
    base_.grad(scaled(x, s_.c), scaled(y, s_.d), gx, gy);
    for (double& v : gx) v *= s_.a * s_.c;
    for (double& v : gy) v *= s_.a * s_.d;
  }
  double primal_value(const Vec& x) const {
    return s_.a * base_.primal_value(scaled(x, s_.c));
  }
  double dual_value(const Vec& y) const {
    return s_.a * base_.dual_value(scaled(y, s_.d));
  }
  double duality_gap(const Vec& x, const Vec& y) const {
    return s_.a * base_.duality_gap(scaled(x, s_.c), scaled(y, s_.d));
  }

  const Vec& xstar() const { return xstar_; }  // norm rx by construction
  const Vec& ystar() const { return ystar_; }  // norm ry by construction

 private:
  Base base_;
  ScalingReduction s_;
  Vec xstar_;
  Vec ystar_;
};

/// Reduction instances per the convex-concave lower-bound corollaries.
/// The strong convexity constants of the base are derived from (rx, ry,
/// eps); lx/ly/lxy are the target class constants.
ScaledInstance<PureInstance> build_scaled_cc_general(double lx, double ly,
                                                     double lxy, int n,
                                                     double rx, double ry,
                                                     double eps);
ScaledInstance<BilinearInstance> build_scaled_cc_bilinear(double lxy, int n,
                                                          double rx, double ry,
                                                          double eps);

/// Iteration lower bounds for the convex-concave classes at accuracy eps:
/// the three-term budget for the general class and the coupling-only
/// budget for the bilinear class.
double cc_lower_bound_general(double lx, double ly, double lxy, double rx,
                              double ry, double eps);
double cc_lower_bound_bilinear(double lxy, double rx, double ry, double eps);

}  // namespace saddlelab
