#pragma once

#include <vector>

#include "saddlelab/vec.hpp"

namespace saddlelab {

/// Orthogonal map stored as an ordered composition of Householder
/// reflectors R = H(u_1) H(u_2) ... H(u_m). Orthogonality is exact by
/// construction; apply cost is O(m n).
class Rotation {
 public:
  bool is_identity() const { return us_.empty(); }
  int reflector_count() const { return static_cast<int>(us_.size()); }

  /// R <- R * H(u); u must be a unit vector.
  void push_reflector(Vec u) { us_.push_back(std::move(u)); }

  /// R <- R * other (appends other's reflectors on the right).
  void compose_right(const Rotation& other) {
    for (const Vec& u : other.us_) us_.push_back(u);
  }

  const std::vector<Vec>& reflectors() const { return us_; }

  /// R v
  Vec apply(const Vec& v) const;
  /// R^T v
  Vec apply_transpose(const Vec& v) const;

  /// Dense n x n matrix of R, column by column. Intended for small-n
  /// verification only.
  std::vector<Vec> dense(int n) const;

 private:
  static void reflect(const Vec& u, Vec& v);
  std::vector<Vec> us_;
};

/// max_ij |R^T R - I| via the dense materialization.
double orthogonality_residual(const Rotation& r, int n);

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// remainder falls below tol * max(1, ||v||) are dropped as dependent.
std::vector<Vec> orthonormalize(const std::vector<Vec>& gens,
                                double tol = 1e-12);

/// Orthogonal Gamma with Gamma w = w for all w in span(fixed_onb) and
/// Gamma xbar in span(target_onb), where span(fixed) is contained in
/// span(target). Returns the identity when xbar already lies in the target
/// span; otherwise a single reflector acting only on span(fixed)^perp.
/// Throws when the target adds no direction beyond the fixed span but one
/// is needed.
Rotation build_fixing_rotation(const std::vector<Vec>& fixed_onb,
                               const std::vector<Vec>& target_onb,
                               const Vec& xbar);

}  // namespace saddlelab
