#pragma once

#include <cstdint>
#include <functional>

#include "saddlelab/vec.hpp"

namespace saddlelab {

/// Matrix-free kernels for the structured anti-diagonal family
///   A[i, n+1-i] = 1, A[i, n+2-i] = -1 (1-based), A = A^T, ||A||_2 <= 2,
/// its powers, its inverse, and positive definite combinations of A^2.
/// All kernels are O(n) and introduce no fill outside the stencil, so
/// exact zeros stay exact zeros.

Vec apply_A(const Vec& v);
Vec apply_A2(const Vec& v);
Vec apply_A4(const Vec& v);

/// A^{-1} has unit entries exactly where i + j <= n + 1; the apply is a
/// prefix sum read out in reverse. A * apply_Ainv(v) == v.
Vec apply_Ainv(const Vec& v);

/// (c A^2 + d I) v
Vec apply_shifted_A2(double c, double d, const Vec& v);

/// (A^4 + alpha A^2 + beta I) v
Vec apply_quartic_op(double alpha, double beta, const Vec& v);

/// Solve (c A^2 + d I) v = w by banded elimination with one refinement
/// pass. Requires c >= 0, d >= 0, not both zero.
Vec solve_tridiag(double c, double d, const Vec& w);

/// Solve (A^4 + alpha A^2 + beta I) v = w through the factorization
/// (A^2 + r1 I)(A^2 + r2 I) with r1 r2 = beta, r1 + r2 = alpha.
/// Requires alpha^2 >= 4 beta.
Vec solve_quartic_op(double alpha, double beta, const Vec& w);

/// Largest 1-based index i with |v_i| > tol, or 0 for none.
int support_prefix(const Vec& v, double tol);

/// Default absolute threshold for span accounting: 1e-11 * max(1, ||v||_inf).
double span_tolerance(const Vec& v);
int support_prefix(const Vec& v);

/// Closed-form extreme eigenvalues of A^2 at dimension n:
/// lambda_j = 2 - 2 cos((2j-1) pi / (2n+1)).
double a2_eigenvalue_max(int n);
double a2_eigenvalue_min(int n);

/// Spectral-norm estimate of a symmetric operator by power iteration with
/// a final Rayleigh quotient. Deterministic for a fixed seed.
double power_iteration(const std::function<Vec(const Vec&)>& op, int n,
                       int iters, std::uint64_t seed);

/// Smallest eigenvalue estimate of (c A^2 + d I) via inverse iteration.
double inverse_power_iteration_shifted_A2(double c, double d, int n,
                                          int iters, std::uint64_t seed);

/// Typed wrapper over the kernel family.
enum class OpKind { A, A2, A4, AInv, ShiftedA2, QuarticOp };

struct StructuredOperator {
  OpKind kind = OpKind::A;
  double c0 = 0.0;  // c (ShiftedA2) or alpha (QuarticOp)
  double c1 = 0.0;  // d (ShiftedA2) or beta (QuarticOp)

  Vec apply(const Vec& v) const;
};

}  // namespace saddlelab
