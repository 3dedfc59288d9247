#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saddlelab/vec.hpp"

namespace saddlelab {

struct SuiteResult {
  std::string name;
  long checks = 0;
  long failures = 0;
  std::string detail;  // first failure, or summary statistics

  bool pass() const { return failures == 0 && checks > 0; }
  void count(bool ok, const std::string& what);
};

namespace checks {

/// Masked random vectors keep support growth at one index per squared
/// application, for every prefix length below n.
SuiteResult zero_chain(int n, std::uint64_t seed);

/// Geometric approximate dual solutions stay within their a-priori error
/// bound against the banded exact solve, across the parameter grid.
SuiteResult approx_bilinear_grid(int count);

/// Bracket endpoint signs, strict interiority of the bisected root, and
/// the characteristic-quartic residual across the general grid.
SuiteResult quartic_bracket_grid(int count);

/// Pentadiagonal stationarity of the geometric primal approximation: the
/// leading rows vanish and the full residual obeys (7+alpha) q^n.
SuiteResult pure_kkt_grid(int count);

/// Tail-norm distance floors for prefix-supported competitors on both
/// instance families.
SuiteResult distance_bounds_grid(int count);

/// Reference solver runs on their matching worst instances: distances
/// never dip below the geometric envelope and the span schedule is never
/// violated.
SuiteResult solver_envelopes(int n, bool quick = false);

/// Fitted primal-dual rate against the certificate across coupling
/// condition numbers 1e2, 1e4, 1e6.
SuiteResult cp_sandwich();

/// Rotation games at n, k for a span member and a non-span toy on both
/// problem families.
SuiteResult rotation_games(int n, int k);

/// Scaled instances hit their radius targets with non-inflated Lipschitz
/// constants.
SuiteResult scaling_reduction(int n);

/// Rate-certificate invariants: stable-form agreement, the
/// 1/ln(1/q) >= sqrt(kappa+1)/2 - 1/2 chain, monotonicity in the coupling
/// constant, iteration-count edge cases.
SuiteResult bounds_invariants(int count);

/// Exact/approximate solution identities beyond the grid bounds:
/// residual displays, projection floors at even rounds, saddle residuals.
SuiteResult solution_invariants();

/// Fixing-rotation postconditions on random nested subspaces, reflector
/// composition against the dense product, rotated-instance chain rule and
/// value preservation.
SuiteResult rotation_primitives(int n, std::uint64_t seed);

}  // namespace checks

}  // namespace saddlelab
