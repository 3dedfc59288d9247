#pragma once

#include <functional>
#include <string>
#include <vector>

#include "saddlelab/instances.hpp"
#include "saddlelab/rotation.hpp"
#include "saddlelab/solutions.hpp"

namespace saddlelab {

/// Oracle view of the rotated bilinear instance handed to a general
/// (deterministic, not necessarily span-respecting) proximal algorithm.
/// The rotations stay hidden behind the coupling and prox replies.
class ProxGameOracle {
 public:
  ProxGameOracle(const BilinearInstance& base, const Rotation& u,
                 const Rotation& v);

  int dim() const { return base_->dim(); }
  const BilinearParams& params() const { return base_->params(); }

  /// coupling reply handed to the x side: (Lxy/2) U^T A V y
  Vec couple_x(const Vec& y) const;
  /// coupling reply handed to the y side: (Lxy/2) V^T A U x
  Vec couple_y(const Vec& x) const;

  Vec prox_f(double gamma, const Vec& center) const;
  Vec prox_g(double sigma, const Vec& center) const;

 private:
  const BilinearInstance* base_;
  const Rotation* u_;
  const Rotation* v_;
  Vec vtb_;  // V^T b
};

/// Oracle view of the rotated general instance for pure first-order
/// algorithms: gradients only, chain rule through (U, V).
class PureGameOracle {
 public:
  PureGameOracle(const PureInstance& base, const Rotation& u,
                 const Rotation& v);

  int dim() const { return base_->dim(); }
  const GeneralParams& params() const { return base_->params(); }

  void grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const;

 private:
  const PureInstance* base_;
  const Rotation* u_;
  const Rotation* v_;
};

/// Full record of one replay: iterates 0..rounds plus the output pair.
struct GameTrace {
  std::vector<Vec> xs;
  std::vector<Vec> ys;
  Vec x_out;
  Vec y_out;
};

/// A player runs from scratch against the given oracle for the requested
/// number of rounds and must be a deterministic mapping of its own query
/// history (replays are compared across rounds and bitwise at the end).
using ProxPlayer = std::function<GameTrace(const ProxGameOracle&, int)>;
using PurePlayer = std::function<GameTrace(const PureGameOracle&, int)>;

struct GameReport {
  int rounds = 0;
  int n = 0;
  double q = 0.0;
  double bound_rhs = 0.0;
  double achieved_lhs = 0.0;
  bool bound_holds = false;
  double replay_max_err = 0.0;  // worst cross-round iterate deviation
  bool replay_ok = false;
  bool bitwise_replay_ok = false;
  double orth_residual_u = -1.0;  // dense check, n <= 64 only
  double orth_residual_v = -1.0;
  double b_fix_residual = -1.0;  // ||Vb - b||_inf + ||V^T b - b||_inf (bilinear)
  std::vector<std::string> violations;
  Rotation u;
  Rotation v;
};

/// Sequential rotation construction against a proximal-class player on
/// the bilinear worst instance; the final output must satisfy
/// ||V y_out - y*||^2 >= q^{4k+2}/16 ||y*||^2.
GameReport run_rotation_game_prox(const ProxPlayer& alg,
                                  const BilinearParams& p, int k, int n);

/// Same construction for pure first-order players on the general worst
/// instance; final bound on ||U x_out - x*||^2.
GameReport run_rotation_game_pure(const PurePlayer& alg,
                                  const GeneralParams& p, int k, int n);

/// Reference players.
ProxPlayer make_cp_player();
ProxPlayer make_toy_nonspan_prox_player();
PurePlayer make_eg_player();
PurePlayer make_toy_nonspan_pure_player();

/// Span generators of the search subspaces in canonical coordinates,
/// up to history index m.
std::vector<Vec> span_gens_x_bilinear(const Vec& b, int m);
std::vector<Vec> span_gens_y_bilinear(const Vec& b, int m);
std::vector<Vec> span_gens_x_pure(const Vec& b, int m);
std::vector<Vec> span_gens_y_pure(const Vec& b, int m);

}  // namespace saddlelab
