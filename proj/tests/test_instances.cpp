#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "saddlelab/instances.hpp"
#include "saddlelab/rng.hpp"
#include "saddlelab/solutions.hpp"
#include "saddlelab/structured.hpp"

using namespace saddlelab;

namespace {

/// central differences of the instance value; exact for quadratics up to
/// rounding
template <class Inst>
void check_grad_fd(const Inst& inst, const Vec& x, const Vec& y) {
  Vec gx, gy;
  inst.grad(x, y, gx, gy);
  const double h = 1e-5;
  for (int i = 0; i < std::min(inst.dim(), 6); ++i) {
    Vec xp = x, xm = x;
    xp[static_cast<std::size_t>(i)] += h;
    xm[static_cast<std::size_t>(i)] -= h;
    double fd = (inst.value(xp, y) - inst.value(xm, y)) / (2.0 * h);
    CHECK(gx[static_cast<std::size_t>(i)] ==
          doctest::Approx(fd).epsilon(1e-6));
    Vec yp = y, ym = y;
    yp[static_cast<std::size_t>(i)] += h;
    ym[static_cast<std::size_t>(i)] -= h;
    fd = (inst.value(x, yp) - inst.value(x, ym)) / (2.0 * h);
    CHECK(gy[static_cast<std::size_t>(i)] ==
          doctest::Approx(fd).epsilon(1e-6));
  }
}

}  // namespace

TEST_CASE("bilinear instance: forcing vector and origin gradient") {
  BilinearParams p{2.0, 1.0, 1.0};
  BilinearInstance inst(p, 8);
  CHECK(inst.b()[0] == doctest::Approx(-1.0));  // -Lxy^2/(4 mu_x)
  for (int i = 1; i < 8; ++i) CHECK(inst.b()[static_cast<std::size_t>(i)] == 0.0);

  Vec gx, gy;
  inst.grad(zeros(8), zeros(8), gx, gy);
  CHECK(nrm2(gx) == 0.0);
  CHECK(nrm_inf(sub(gy, scaled(inst.b(), -1.0))) == 0.0);
}

TEST_CASE("bilinear instance: gradient vanishes at the saddle") {
  BilinearInstance inst({3.0, 2.0, 0.5}, 32);
  SaddlePoint s = exact_saddle(inst);
  Vec gx, gy;
  inst.grad(s.x, s.y, gx, gy);
  double scale = std::max({1.0, nrm2(s.x), nrm2(s.y)});
  CHECK(nrm2(gx) <= 1e-9 * scale);
  CHECK(nrm2(gy) <= 1e-9 * scale);
}

TEST_CASE("bilinear instance: finite-difference gradients") {
  Rng rng(41);
  BilinearInstance inst({2.0, 1.5, 0.7}, 12);
  check_grad_fd(inst, rng.gaussian_vec(12), rng.gaussian_vec(12));
}

TEST_CASE("bilinear prox maps") {
  BilinearParams p{2.0, 1.0, 1.0};
  BilinearInstance inst(p, 4);

  Vec v = zeros(4);
  v[0] = 2.0;
  Vec px = inst.prox_f(1.0, v);
  CHECK(px[0] == doctest::Approx(1.0));  // v / (1 + gamma mu_x)

  // gamma -> 0 recovers the center
  Vec tiny = inst.prox_f(1e-12, v);
  CHECK(tiny[0] == doctest::Approx(2.0).epsilon(1e-9));

  // sigma = 1, mu_y = 1, u = 0: (0 - b)/2 = -b/2
  Vec py = inst.prox_g(1.0, zeros(4));
  CHECK(nrm_inf(sub(py, scaled(inst.b(), -0.5))) <= 1e-15);

  CHECK_THROWS_AS(inst.prox_f(0.0, v), std::invalid_argument);
  CHECK_THROWS_AS(inst.prox_g(-1.0, v), std::invalid_argument);
}

TEST_CASE("bilinear values and gap") {
  BilinearParams p{2.0, 1.0, 1.0};
  BilinearInstance inst(p, 16);
  CHECK(inst.dual_value(zeros(16)) == 0.0);

  SaddlePoint s = exact_saddle(inst);
  CHECK(std::fabs(inst.duality_gap(s.x, s.y)) <= 1e-9);

  // gap dominates the squared distances (strong convexity bound)
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x = rng.gaussian_vec(16), y = rng.gaussian_vec(16);
    double gap = inst.duality_gap(x, y);
    double dx = nrm2(sub(x, s.x)), dy = nrm2(sub(y, s.y));
    double rhs = 0.5 * p.mu_x * dx * dx + 0.5 * p.mu_y * dy * dy;
    CHECK(gap >= rhs * (1.0 - 1e-9) - 1e-9);
  }
}

TEST_CASE("bilinear coupling norm stays within Lxy") {
  BilinearParams p{5.0, 2.0, 0.3};
  BilinearInstance inst(p, 64);
  double norm = power_iteration(
      [&](const Vec& v) { return inst.coupling_apply(v); }, 64, 300, 51);
  CHECK(norm <= p.lxy + 1e-9);
}

TEST_CASE("bilinear dimension floor is enforced when requested") {
  BilinearParams p{2.0, 1.0, 1.0};
  CHECK_NOTHROW(BilinearInstance(p, 40, 10));
  CHECK_THROWS_AS(BilinearInstance(p, 39, 10), std::invalid_argument);
  CHECK_NOTHROW(BilinearInstance(p, 4, 0));
}

TEST_CASE("pure instance: bhat support and b construction") {
  GeneralParams gp;
  gp.lx = gp.ly = gp.lxy = 4.0;
  gp.mu_x = gp.mu_y = 1.0;
  const int n = 24;
  PureInstance inst(gp, n);
  CHECK(inst.bhat()[0] != 0.0);
  CHECK(inst.bhat()[1] != 0.0);
  for (int i = 2; i < n; ++i)
    CHECK(inst.bhat()[static_cast<std::size_t>(i)] == 0.0);

  // A b = (2 Bx By / Lxy) bhat by construction
  Vec ab = apply_A(inst.b());
  Vec expect = scaled(inst.bhat(), 2.0 * inst.rate().bx * inst.rate().by / gp.lxy);
  CHECK(nrm_inf(sub(ab, expect)) <= 1e-12 * std::max(1.0, nrm_inf(expect)));
}

TEST_CASE("pure instance: finite differences and saddle gradient") {
  GeneralParams gp;
  gp.lx = 6.0;
  gp.ly = 3.0;
  gp.lxy = 2.0;
  gp.mu_x = 1.0;
  gp.mu_y = 0.5;
  const int n = 12;
  PureInstance inst(gp, n);
  Rng rng(47);
  check_grad_fd(inst, rng.gaussian_vec(n), rng.gaussian_vec(n));

  SaddlePoint s = exact_saddle(inst);
  Vec gx, gy;
  inst.grad(s.x, s.y, gx, gy);
  double scale = std::max({1.0, nrm2(s.x), nrm2(s.y)});
  CHECK(nrm2(gx) <= 1e-9 * scale);
  CHECK(nrm2(gy) <= 1e-9 * scale);
}

TEST_CASE("pure instance: class membership through the spectrum") {
  GeneralParams gp;
  gp.lx = gp.ly = gp.lxy = 4.0;
  gp.mu_x = gp.mu_y = 1.0;
  const int n = 32;
  PureInstance inst(gp, n);
  double bx = inst.rate().bx;

  // the x-block norm equals Bx lambda_max(A^2) + mu_x, just below Lx
  double est = power_iteration(
      [&](const Vec& v) { return apply_shifted_A2(bx, gp.mu_x, v); }, n, 4000,
      53);
  double exact = bx * a2_eigenvalue_max(n) + gp.mu_x;
  CHECK(est == doctest::Approx(exact).epsilon(1e-6));
  CHECK(est <= gp.lx + 1e-8);

  // strong convexity floor: smallest eigenvalue >= mu_x
  double lo = inverse_power_iteration_shifted_A2(bx, gp.mu_x, n, 300, 59);
  CHECK(lo >= gp.mu_x - 1e-9);
  CHECK(lo == doctest::Approx(bx * a2_eigenvalue_min(n) + gp.mu_x)
                  .epsilon(1e-6));

  // coupling norm
  double cn = power_iteration(
      [&](const Vec& v) { return inst.coupling_apply(v); }, n, 300, 61);
  CHECK(cn <= gp.lxy + 1e-9);
}

TEST_CASE("pure instance: gap nonnegative and zero at the saddle") {
  GeneralParams gp;
  gp.lx = gp.ly = gp.lxy = 4.0;
  gp.mu_x = gp.mu_y = 1.0;
  PureInstance inst(gp, 20);
  SaddlePoint s = exact_saddle(inst);
  CHECK(std::fabs(inst.duality_gap(s.x, s.y)) <= 1e-9);
  Rng rng(67);
  for (int trial = 0; trial < 50; ++trial) {
    Vec x = rng.gaussian_vec(20), y = rng.gaussian_vec(20);
    double gap = inst.duality_gap(x, y);
    double dx = nrm2(sub(x, s.x)), dy = nrm2(sub(y, s.y));
    CHECK(gap >= 0.5 * gp.mu_x * dx * dx * (1.0 - 1e-9) +
                     0.5 * gp.mu_y * dy * dy * (1.0 - 1e-9) - 1e-9);
  }
}

TEST_CASE("rotated instance: chain rule and value preservation") {
  Rng rng(71);
  const int n = 24;
  BilinearInstance base({2.0, 1.0, 1.0}, n);
  Rotation u, v;
  for (int i = 0; i < 3; ++i) {
    Vec a = rng.gaussian_vec(n);
    double na = nrm2(a);
    for (double& x : a) x /= na;
    u.push_reflector(a);
    Vec b = rng.gaussian_vec(n);
    double nb = nrm2(b);
    for (double& x : b) x /= nb;
    v.push_reflector(b);
  }
  CHECK(orthogonality_residual(u, n) <= 1e-12);
  CHECK(orthogonality_residual(v, n) <= 1e-12);

  RotatedInstance<BilinearInstance> rot(base, u, v);
  Vec x = rng.gaussian_vec(n), y = rng.gaussian_vec(n);
  Vec gx, gy, bx, by;
  rot.grad(x, y, gx, gy);
  base.grad(u.apply(x), v.apply(y), bx, by);
  CHECK(nrm_inf(sub(gx, u.apply_transpose(bx))) <= 1e-12);
  CHECK(nrm_inf(sub(gy, v.apply_transpose(by))) <= 1e-12);
  check_grad_fd(rot, x, y);

  SaddlePoint s = exact_saddle(base);
  Vec xr = rot.pull_back_x(s.x), yr = rot.pull_back_y(s.y);
  CHECK(std::fabs(rot.value(xr, yr) - base.value(s.x, s.y)) <= 1e-9);
  CHECK(std::fabs(rot.duality_gap(xr, yr)) <= 1e-9);
  rot.grad(xr, yr, gx, gy);
  CHECK(nrm2(gx) <= 1e-10);
  CHECK(nrm2(gy) <= 1e-10);
}

TEST_CASE("scaled instance: radii, gradients, identity case") {
  auto inst = build_scaled_cc_general(4.0, 4.0, 2.0, 96, 1.0, 1.0, 1e-3);
  CHECK(nrm2(inst.xstar()) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(nrm2(inst.ystar()) == doctest::Approx(1.0).epsilon(1e-8));
  Vec gx, gy;
  inst.grad(inst.xstar(), inst.ystar(), gx, gy);
  CHECK(nrm2(gx) <= 1e-8);
  CHECK(nrm2(gy) <= 1e-8);
  CHECK(std::fabs(inst.duality_gap(inst.xstar(), inst.ystar())) <= 1e-8);

  // identity scaling: a scaled instance built at c = d = 1 reproduces the
  // base oracles
  const ScalingReduction& s = inst.reduction();
  ScalingReduction id = s;
  id.c = id.d = id.a = 1.0;
  ScaledInstance<PureInstance> same(inst.base(), id, zeros(96), zeros(96));
  Rng rng(73);
  Vec x = rng.gaussian_vec(96), y = rng.gaussian_vec(96);
  CHECK(same.value(x, y) == inst.base().value(x, y));
  CHECK(same.duality_gap(x, y) == inst.base().duality_gap(x, y));
}

TEST_CASE("scaled instance: bilinear variant and degenerate input") {
  auto inst = build_scaled_cc_bilinear(2.0, 64, 2.0, 0.5, 1e-3);
  CHECK(nrm2(inst.xstar()) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(nrm2(inst.ystar()) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(build_scaled_cc_bilinear(2.0, 64, -1.0, 0.5, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("cc lower-bound formulas") {
  // Lx = Ly = 0 collapses the three-term budget onto the coupling term
  CHECK(cc_lower_bound_general(0.0, 0.0, 1.0, 1.0, 1.0, 0.01) ==
        doctest::Approx(100.0));
  CHECK(cc_lower_bound_bilinear(1.0, 1.0, 1.0, 0.01) == doctest::Approx(100.0));
}

TEST_CASE("dimension mismatch is rejected") {
  BilinearInstance inst({2.0, 1.0, 1.0}, 8);
  Vec bad = zeros(7);
  Vec gx, gy;
  CHECK_THROWS_AS(inst.grad(bad, bad, gx, gy), std::invalid_argument);
  CHECK_THROWS_AS(inst.prox_f(1.0, bad), std::invalid_argument);
}
