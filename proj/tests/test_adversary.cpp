#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "saddlelab/adversary.hpp"
#include "saddlelab/rng.hpp"
#include "saddlelab/structured.hpp"

using namespace saddlelab;

TEST_CASE("fixing rotation: point already in the fixed span") {
  const int n = 8;
  std::vector<Vec> fixed = {unit(n, 0), unit(n, 1)};
  std::vector<Vec> target = {unit(n, 0), unit(n, 1), unit(n, 2)};
  Vec xbar = add(scaled(unit(n, 0), 2.0), scaled(unit(n, 1), -0.5));
  Rotation g = build_fixing_rotation(fixed, target, xbar);
  CHECK(g.is_identity());
  CHECK(nrm_inf(sub(g.apply(xbar), xbar)) == 0.0);
}

TEST_CASE("fixing rotation: e3 maps onto +-e2 while e1 stays put") {
  const int n = 5;
  std::vector<Vec> fixed = {unit(n, 0)};
  std::vector<Vec> target = {unit(n, 0), unit(n, 1)};
  Vec xbar = unit(n, 2);
  Rotation g = build_fixing_rotation(fixed, target, xbar);
  Vec mapped = g.apply(xbar);
  CHECK(std::fabs(std::fabs(mapped[1]) - 1.0) <= 1e-12);
  CHECK(std::fabs(mapped[0]) <= 1e-12);
  CHECK(std::fabs(mapped[2]) <= 1e-12);
  CHECK(nrm_inf(sub(g.apply(unit(n, 0)), unit(n, 0))) <= 1e-15);
}

TEST_CASE("fixing rotation: random nested subspaces at n = 32") {
  const int n = 32;
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Vec> gens;
    for (int i = 0; i < 7; ++i) gens.push_back(rng.gaussian_vec(n));
    auto target = orthonormalize(gens);
    REQUIRE(target.size() == 7);
    std::vector<Vec> fixed(target.begin(), target.begin() + 4);
    Vec xbar = rng.gaussian_vec(n);
    Rotation g = build_fixing_rotation(fixed, target, xbar);

    for (const Vec& w : fixed)
      CHECK(nrm_inf(sub(g.apply(w), w)) <= 1e-12);
    Vec rem = g.apply(xbar);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : target) axpy(-dot(b, rem), b, rem);
    CHECK(nrm2(rem) <= 1e-10 * std::max(1.0, nrm2(xbar)));
    CHECK(orthogonality_residual(g, n) <= 1e-12);
  }
}

TEST_CASE("fixing rotation: impossible when the target adds nothing") {
  const int n = 6;
  std::vector<Vec> fixed = {unit(n, 0)};
  std::vector<Vec> target = {unit(n, 0)};  // same span
  CHECK_THROWS_AS(build_fixing_rotation(fixed, target, unit(n, 3)),
                  std::invalid_argument);
}

TEST_CASE("span generators match the explicit search-space structure") {
  const int n = 16;
  BilinearInstance inst({2.0, 1.0, 1.0}, n);
  // y side: span{b, A^2 b, ...} ends up prefix-supported
  auto gy = span_gens_y_bilinear(inst.b(), 7);  // ceil(7/2) = 4 generators
  CHECK(gy.size() == 4);
  CHECK(support_prefix(gy[0]) == 1);
  CHECK(support_prefix(gy[3]) == 4);
  // x side: span{A b, A^3 b, ...} is suffix-supported
  auto gx = span_gens_x_bilinear(inst.b(), 7);  // floor(7/2) = 3 generators
  CHECK(gx.size() == 3);
  CHECK(support_prefix(gx[0]) == n);
  CHECK(span_gens_x_bilinear(inst.b(), 1).empty());

  GeneralParams gp;
  gp.lx = gp.ly = gp.lxy = 4.0;
  gp.mu_x = gp.mu_y = 1.0;
  PureInstance pinst(gp, n);
  auto px = span_gens_x_pure(pinst.b(), 5);  // m - 1 = 4 generators
  CHECK(px.size() == 4);
  CHECK(support_prefix(px[0]) == 2);  // A b is proportional to bhat
  CHECK(support_prefix(px[3]) == 5);
  auto py = span_gens_y_pure(pinst.b(), 5);
  CHECK(py.size() == 5);
}

TEST_CASE("rotation game: span members degenerate to identity") {
  BilinearParams bp{2.0, 1.0, 1.0};
  GameReport rep = run_rotation_game_prox(make_cp_player(), bp, 5, 64);
  CHECK(rep.bound_holds);
  CHECK(rep.replay_ok);
  CHECK(rep.bitwise_replay_ok);
  CHECK(rep.u.is_identity());
  CHECK(rep.v.is_identity());
  CHECK(rep.orth_residual_u <= 1e-12);
  CHECK(rep.orth_residual_v <= 1e-12);
  CHECK(rep.b_fix_residual <= 1e-11);
  CHECK(rep.violations.empty());

  GeneralParams gp;
  gp.lx = gp.ly = gp.lxy = 4.0;
  gp.mu_x = gp.mu_y = 1.0;
  GameReport rep2 = run_rotation_game_pure(make_eg_player(), gp, 5, 64);
  CHECK(rep2.bound_holds);
  CHECK(rep2.u.is_identity());
  CHECK(rep2.v.is_identity());
  CHECK(rep2.violations.empty());
}

TEST_CASE("rotation game: non-span toys are forced back under the bound") {
  BilinearParams bp{2.0, 1.0, 1.0};
  GameReport rep =
      run_rotation_game_prox(make_toy_nonspan_prox_player(), bp, 5, 64);
  CHECK(rep.bound_holds);
  CHECK(rep.replay_ok);
  CHECK(rep.bitwise_replay_ok);
  CHECK(rep.u.reflector_count() > 0);  // nontrivial rotations this time
  CHECK(rep.v.reflector_count() > 0);
  CHECK(rep.orth_residual_u <= 1e-12);
  CHECK(rep.orth_residual_v <= 1e-12);
  CHECK(rep.b_fix_residual <= 1e-11);
  CHECK(rep.violations.empty());

  GeneralParams gp;
  gp.lx = gp.ly = gp.lxy = 4.0;
  gp.mu_x = gp.mu_y = 1.0;
  GameReport rep2 =
      run_rotation_game_pure(make_toy_nonspan_pure_player(), gp, 3, 32);
  CHECK(rep2.bound_holds);
  CHECK(rep2.replay_ok);
  CHECK(rep2.bitwise_replay_ok);
  CHECK(rep2.u.reflector_count() + rep2.v.reflector_count() > 0);
  CHECK(rep2.violations.empty());
}

TEST_CASE("rotation game: the final rotations preserve the saddle") {
  BilinearParams bp{2.0, 1.0, 1.0};
  GameReport rep =
      run_rotation_game_prox(make_toy_nonspan_prox_player(), bp, 4, 48);
  REQUIRE(rep.bound_holds);
  BilinearInstance base(bp, 48);
  SaddlePoint star = exact_saddle(base);
  RotatedInstance<BilinearInstance> rot(base, rep.u, rep.v);
  Vec xr = rot.pull_back_x(star.x);
  Vec yr = rot.pull_back_y(star.y);
  CHECK(std::fabs(rot.value(xr, yr) - base.value(star.x, star.y)) <= 1e-9);
  CHECK(std::fabs(rot.duality_gap(xr, yr)) <= 1e-9);
  Vec gx, gy;
  rot.grad(xr, yr, gx, gy);
  CHECK(nrm2(gx) <= 1e-9);
  CHECK(nrm2(gy) <= 1e-9);
}

TEST_CASE("rotation game: refuses an undersized dimension") {
  BilinearParams bp{2.0, 1.0, 1.0};
  CHECK_THROWS_AS(run_rotation_game_prox(make_cp_player(), bp, 5, 16),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_rotation_game_prox(make_cp_player(), bp, 0, 64),
                  std::invalid_argument);
}

TEST_CASE("rotation game: a nondeterministic player is rejected") {
  int flip = 0;
  ProxPlayer bad = [&flip](const ProxGameOracle& o, int rounds) {
    GameTrace tr;
    const int n = o.dim();
    Vec x = zeros(n), y = zeros(n);
    tr.xs.push_back(x);
    tr.ys.push_back(y);
    for (int k = 1; k <= rounds; ++k) {
      y = o.prox_g(0.5, add(y, scaled(o.couple_y(x), 0.5)));
      x = o.prox_f(0.5, sub(x, scaled(o.couple_x(y), 0.5)));
      x[0] += 1e-3 * (flip++ % 7);  // depends on call count, not history
      tr.xs.push_back(x);
      tr.ys.push_back(y);
    }
    tr.x_out = x;
    tr.y_out = y;
    return tr;
  };
  BilinearParams bp{2.0, 1.0, 1.0};
  CHECK_THROWS_AS(run_rotation_game_prox(bad, bp, 3, 32), std::runtime_error);
}

TEST_CASE("game oracle: prox of the rotated linear term uses V^T b") {
  const int n = 16;
  BilinearInstance base({2.0, 1.0, 1.0}, n);
  Rng rng(103);
  Rotation u, v;
  Vec a = rng.gaussian_vec(n);
  double na = nrm2(a);
  for (double& x : a) x /= na;
  v.push_reflector(a);
  ProxGameOracle o(base, u, v);
  Vec reply = o.prox_g(0.5, zeros(n));
  Vec expect = scaled(v.apply_transpose(base.b()), -0.5 / 1.5);
  CHECK(nrm_inf(sub(reply, expect)) <= 1e-14);
}
