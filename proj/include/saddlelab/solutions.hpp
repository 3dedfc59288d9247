#pragma once

#include "saddlelab/instances.hpp"
#include "saddlelab/params.hpp"
#include "saddlelab/vec.hpp"

namespace saddlelab {

/// Saddle point computed by banded solves, never by running an iterative
/// solver; serves as the independent oracle for every distance and gap
/// measurement.
struct SaddlePoint {
  Vec x;
  Vec y;
  double grad_residual_x = 0.0;
  double grad_residual_y = 0.0;
};

/// y* = (A^2 + alpha I)^{-1} e_1 with alpha = 4 mu_x mu_y / Lxy^2, then
/// x* = -(Lxy / (2 mu_x)) A y*.
SaddlePoint exact_saddle(const BilinearInstance& inst);

/// x* = (A^4 + alpha A^2 + beta I)^{-1} bhat, then
/// y* = (By A^2 + mu_y I)^{-1} ((Lxy/2) A x* - b).
SaddlePoint exact_saddle(const PureInstance& inst);

/// Geometric-form approximate solution with its a-priori error bound.
struct ApproxSolution {
  Vec v;
  double bound = 0.0;
  double q = 0.0;
};

/// yhat_i = q^i / (1 - q); ||yhat - y*|| <= q^{n+1} / (alpha (1 - q)).
ApproxSolution approx_y_star(double alpha, int n);

/// xhat_i = q^i; ||xhat - x*|| <= ((7 + alpha) / beta) q^n.
/// Requires a general-kind certificate.
ApproxSolution approx_x_star(const RateCertificate& cert, int n);

/// Forcing vector with bhat_1 = (2+a+b) q - (3+a) q^2 + q^3, bhat_2 = q-1,
/// zero elsewhere; the right-hand side solved by xhat up to its last two
/// rows.
Vec make_bhat(const RateCertificate& cert, int n);

/// min over supp(v) in {1..k} of ||v - vstar|| — the tail norm
/// sqrt(sum_{i>k} vstar_i^2). k = 0 gives ||vstar||, k = n gives 0.
double projected_min_distance(const Vec& vstar, int k);

}  // namespace saddlelab
