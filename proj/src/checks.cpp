#include "saddlelab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddlelab/adversary.hpp"
#include "saddlelab/grids.hpp"
#include "saddlelab/instances.hpp"
#include "saddlelab/params.hpp"
#include "saddlelab/rng.hpp"
#include "saddlelab/rotation.hpp"
#include "saddlelab/solutions.hpp"
#include "saddlelab/solvers.hpp"
#include "saddlelab/structured.hpp"

namespace saddlelab {

void SuiteResult::count(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    ++failures;
    if (detail.empty()) detail = what;
  }
}

namespace checks {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int grid_dim_bilinear(const RateCertificate& c) {
  return std::clamp(min_dim_bilinear(c, 0), 8, 4096);
}

int grid_dim_pure(const RateCertificate& c) {
  return std::clamp(min_dim_pure(c, 0), 8, 4096);
}

constexpr int kGridDimCap = 4096;

}  // namespace

SuiteResult zero_chain(int n, std::uint64_t seed) {
  SuiteResult res;
  res.name = "zero-chain";
  Rng rng(seed);
  for (int k = 1; k <= n - 1; ++k) {
    Vec v = zeros(n);
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = rng.normal();
    Vec w = apply_A2(v);
    int pfx = support_prefix(w);
    res.count(pfx <= k + 1, "support grew past k+1 at k=" + std::to_string(k));
  }
  // zero vector edge
  res.count(support_prefix(zeros(n)) == 0, "prefix of the zero vector");
  return res;
}

SuiteResult approx_bilinear_grid(int count) {
  SuiteResult res;
  res.name = "approx-solution-residual";
  auto grid = bilinear_grid(count, kGridDimCap);
  for (const auto& p : grid) {
    RateCertificate c = prox_rate_q(p);
    int n = grid_dim_bilinear(c);
    BilinearInstance inst(p, n);
    SaddlePoint star = exact_saddle(inst);
    ApproxSolution ap = approx_y_star(c.alpha, n);
    double err = nrm2(sub(ap.v, star.y));
    // the analytic bound plus the double-precision floor of the banded
    // solve itself (the bound can sit many orders below representable
    // rounding noise on well-conditioned tuples)
    double fp_floor = 1e-13 * std::max({1.0, nrm2(star.y), nrm2(ap.v)});
    bool ok = err <= ap.bound * (1.0 + 1e-10) + fp_floor;
    res.count(ok, "||yhat - y*|| = " + fmt(err) + " > bound " + fmt(ap.bound) +
                      " at Lxy=" + fmt(p.lxy) + " mux=" + fmt(p.mu_x) +
                      " muy=" + fmt(p.mu_y));
  }
  return res;
}

SuiteResult quartic_bracket_grid(int count) {
  SuiteResult res;
  res.name = "quartic-bracket";
  auto grid = general_grid(count, 0);
  for (const auto& p : grid) {
    QuarticBracket br = pure_quartic_bracket(p);
    RateCertificate c = pure_rate_q(p);
    std::string tag = " at Lx=" + fmt(p.lx) + " Ly=" + fmt(p.ly) +
                      " Lxy=" + fmt(p.lxy) + " mux=" + fmt(p.mu_x) +
                      " muy=" + fmt(p.mu_y);
    res.count(br.f_lo < 0.0, "f(r_lo) not negative" + tag);
    res.count(br.f_hi > 0.0, "f(r_hi) not positive" + tag);
    res.count(std::fabs(br.f_hi - 1.0) <=
                  1e-9 * pure_quartic_residual_scale(c),
              "f(r_hi) far from 1" + tag);
    // strict interiority, modulo the ulp at which the root can coincide
    // with an endpoint in double precision on extreme tuples
    double ulp_slack = 8.0 * 2.220446049250313e-16;
    res.count(c.q > c.q_lo - ulp_slack && c.q < c.q_hi + ulp_slack,
              "q not strictly bracketed" + tag);
    double resid = std::fabs(pure_quartic_residual(c));
    res.count(resid <= 1e-10 * pure_quartic_residual_scale(c),
              "quartic residual " + fmt(resid) + tag);
  }
  return res;
}

SuiteResult pure_kkt_grid(int count) {
  SuiteResult res;
  res.name = "pure-kkt-residual";
  auto grid = general_grid(count, kGridDimCap);
  for (const auto& p : grid) {
    RateCertificate c = pure_rate_q(p);
    int n = grid_dim_pure(c);
    ApproxSolution ax = approx_x_star(c, n);
    Vec bhat = make_bhat(c, n);
    Vec resid = apply_quartic_op(c.alpha, c.beta, ax.v);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= bhat[i];
    std::string tag = " at Lx=" + fmt(p.lx) + " Lxy=" + fmt(p.lxy) +
                      " mux=" + fmt(p.mu_x);
    // rows 1..n-2 vanish
    double head = 0.0;
    for (int i = 0; i < n - 2; ++i)
      head = std::max(head, std::fabs(resid[static_cast<std::size_t>(i)]));
    double row_scale = std::max(1.0, 6.0 + 2.0 * c.alpha + c.beta);
    res.count(head <= 1e-9 * row_scale,
              "leading rows residual " + fmt(head) + tag);
    double full = nrm2(resid);
    double bound = (7.0 + c.alpha) * std::pow(c.q, n);
    res.count(full <= bound * (1.0 + 1e-9) + 1e-9 * row_scale * 1e-6,
              "residual " + fmt(full) + " above (7+a) q^n = " + fmt(bound) +
                  tag);
  }
  return res;
}

SuiteResult distance_bounds_grid(int count) {
  SuiteResult res;
  res.name = "distance-lower-bounds";
  auto bg = bilinear_grid(count / 2, kGridDimCap);
  for (const auto& p : bg) {
    RateCertificate c = prox_rate_q(p);
    int n = grid_dim_bilinear(c);
    BilinearInstance inst(p, n);
    SaddlePoint star = exact_saddle(inst);
    double nrm = nrm2(star.y);
    bool ok = true;
    int bad_k = -1;
    for (int k = 0; k <= n / 4; ++k) {
      double tail = projected_min_distance(star.y, k);
      double floor_sq = std::pow(c.q, 2.0 * k) / 16.0 * nrm * nrm;
      if (tail * tail < floor_sq * (1.0 - 1e-12)) {
        ok = false;
        bad_k = k;
        break;
      }
    }
    res.count(ok, "bilinear tail floor failed at k=" + std::to_string(bad_k) +
                      " Lxy=" + fmt(p.lxy) + " mux=" + fmt(p.mu_x) +
                      " muy=" + fmt(p.mu_y));
  }
  auto gg = general_grid(count - count / 2, kGridDimCap);
  for (const auto& p : gg) {
    RateCertificate c = pure_rate_q(p);
    int n = grid_dim_pure(c);
    PureInstance inst(p, n);
    SaddlePoint star = exact_saddle(inst);
    double nrm = nrm2(star.x);
    bool ok = true;
    int bad_k = -1;
    for (int k = 0; k <= n / 4; ++k) {
      double tail = projected_min_distance(star.x, k);
      double floor_sq = std::pow(c.q, 2.0 * k) / 16.0 * nrm * nrm;
      if (tail * tail < floor_sq * (1.0 - 1e-12)) {
        ok = false;
        bad_k = k;
        break;
      }
    }
    res.count(ok, "pure tail floor failed at k=" + std::to_string(bad_k) +
                      " Lx=" + fmt(p.lx) + " Lxy=" + fmt(p.lxy));
  }
  return res;
}

SuiteResult solver_envelopes(int n, bool quick) {
  SuiteResult res;
  res.name = "solver-envelopes";

  // proximal side: primal-dual scheme on the bilinear instance
  {
    BilinearParams p{2.0, 1.0, 1.0};
    RateCertificate c = prox_rate_q(p);
    BilinearInstance inst(p, n);
    SaddlePoint star = exact_saddle(inst);
    SolverConfig cfg = make_config(SolverKind::cp, p);
    cfg.max_iters = quick ? 120 : 300;
    SpanMonitor mon(SpanMonitor::Kind::bilinear);
    IterateTrace t = run_cp(inst, star.x, star.y, cfg, &mon);
    EnvelopeCheck env = check_envelope_bilinear(t, c.q, nrm2(star.y), n);
    res.count(env.violations == 0,
              "cp envelope violations: " + std::to_string(env.violations));
    res.count(mon.violations().empty(),
              "cp span violations: " + std::to_string(mon.violations().size()));
    res.count(!t.diverged, "cp diverged");
    res.count(t.prox_calls == 2 * t.iters, "cp oracle accounting");
  }

  // pure side: the four gradient schemes on the general instance
  GeneralParams p;
  p.lx = p.ly = p.lxy = 4.0;
  p.mu_x = p.mu_y = 1.0;
  RateCertificate c = pure_rate_q(p);
  PureInstance inst(p, n);
  SaddlePoint star = exact_saddle(inst);
  double d0 = nrm2(star.x);

  struct Entry {
    SolverKind kind;
    long iters;
  };
  const Entry entries[] = {{SolverKind::gda, quick ? 200 : 500},
                           {SolverKind::eg, quick ? 150 : 300},
                           {SolverKind::ade, quick ? 150 : 300},
                           {SolverKind::double_loop, quick ? 60 : 200}};
  for (const Entry& e : entries) {
    SolverConfig cfg = make_config(e.kind, p);
    cfg.max_iters = e.iters;
    SpanMonitor mon(SpanMonitor::Kind::pure);
    IterateTrace t;
    switch (e.kind) {
      case SolverKind::gda:
        t = run_gda(inst, star.x, star.y, cfg, &mon);
        break;
      case SolverKind::eg:
        t = run_eg(inst, star.x, star.y, cfg, &mon);
        break;
      case SolverKind::ade:
        t = run_ade(inst, star.x, star.y, cfg, &mon);
        break;
      default:
        t = run_double_loop(inst, star.x, star.y, cfg, &mon);
        break;
    }
    EnvelopeCheck env = check_envelope_pure(t, c.q, d0, n);
    std::string who = solver_name(e.kind);
    res.count(env.violations == 0,
              who + " envelope violations: " + std::to_string(env.violations));
    res.count(mon.violations().empty(),
              who + " span violations: " +
                  std::to_string(mon.violations().size()));
    res.count(!t.diverged, who + " diverged");
    if (e.kind == SolverKind::eg)
      res.count(t.grad_calls == 2 * t.iters, "eg oracle accounting");
  }
  return res;
}

SuiteResult cp_sandwich() {
  SuiteResult res;
  res.name = "cp-optimality-sandwich";
  struct Case {
    double lxy;
    int n;
    long iters;
  };
  const Case cases[] = {{10.0, 512, 400}, {100.0, 1024, 900}, {1000.0, 4096, 2200}};
  std::string stats;
  for (const Case& cs : cases) {
    BilinearParams p{cs.lxy, 1.0, 1.0};
    RateCertificate c = prox_rate_q(p);
    BilinearInstance inst(p, cs.n);
    SaddlePoint star = exact_saddle(inst);
    SolverConfig cfg = make_config(SolverKind::cp, p);
    cfg.max_iters = cs.iters;
    IterateTrace t = run_cp(inst, star.x, star.y, cfg);
    double rho = fit_rate_per_iter(t, /*use_dist_y=*/true);
    std::string tag = " at kappa_xy=" + fmt(p.kappa_xy());
    res.count(std::isfinite(rho) && rho > 0.0 && rho < 1.0,
              "rate fit failed" + tag);
    res.count(rho >= c.q - 1e-6,
              "fitted rho = " + fmt(rho) + " beats the floor q = " + fmt(c.q) +
                  tag);
    double factor = std::log(1.0 / c.q) / std::log(1.0 / rho);
    res.count(factor >= 1.0 - 1e-9 && factor <= 10.0,
              "optimality factor " + fmt(factor) + " outside [1,10]" + tag);
    stats += " kappa=" + fmt(p.kappa_xy()) + ": rho=" + fmt(rho) +
             " q=" + fmt(c.q) + " factor=" + fmt(factor) + ";";
  }
  if (res.failures == 0) res.detail = stats;
  return res;
}

SuiteResult rotation_games(int n, int k) {
  SuiteResult res;
  res.name = "rotation-games";

  auto judge = [&res](const GameReport& rep, const std::string& who,
                      bool expect_identity) {
    res.count(rep.bound_holds, who + ": distance bound failed (lhs=" +
                                   fmt(rep.achieved_lhs) + " rhs=" +
                                   fmt(rep.bound_rhs) + ")");
    res.count(rep.replay_ok,
              who + ": replay deviation " + fmt(rep.replay_max_err));
    res.count(rep.bitwise_replay_ok, who + ": bitwise replay mismatch");
    res.count(rep.orth_residual_u <= 1e-12 && rep.orth_residual_v <= 1e-12,
              who + ": orthogonality residual u=" + fmt(rep.orth_residual_u) +
                  " v=" + fmt(rep.orth_residual_v));
    if (expect_identity)
      res.count(rep.u.is_identity() && rep.v.is_identity(),
                who + ": span member still forced nontrivial rotations");
    res.count(rep.violations.empty(),
              who + ": " + (rep.violations.empty() ? std::string()
                                                   : rep.violations.front()));
  };

  BilinearParams bp{2.0, 1.0, 1.0};
  judge(run_rotation_game_prox(make_cp_player(), bp, k, n), "prox/cp", true);
  judge(run_rotation_game_prox(make_toy_nonspan_prox_player(), bp, k, n),
        "prox/toy-nonspan", false);

  GeneralParams gp;
  gp.lx = gp.ly = gp.lxy = 4.0;
  gp.mu_x = gp.mu_y = 1.0;
  judge(run_rotation_game_pure(make_eg_player(), gp, k, n), "pure/eg", true);
  judge(run_rotation_game_pure(make_toy_nonspan_pure_player(), gp, k, n),
        "pure/toy-nonspan", false);
  return res;
}

SuiteResult scaling_reduction(int n) {
  SuiteResult res;
  res.name = "scaling-reduction";
  struct Case {
    double rx, ry, eps;
  };
  const Case cases[] = {{1.0, 1.0, 1e-2}, {2.0, 0.5, 1e-3}};
  const double lx = 4.0, ly = 4.0, lxy = 2.0;
  for (const Case& cs : cases) {
    auto scaled_inst =
        build_scaled_cc_general(lx, ly, lxy, n, cs.rx, cs.ry, cs.eps);
    std::string tag = " at rx=" + fmt(cs.rx) + " ry=" + fmt(cs.ry) +
                      " eps=" + fmt(cs.eps);
    res.count(std::fabs(nrm2(scaled_inst.xstar()) - cs.rx) <= 1e-8 * cs.rx,
              "||x*|| != rx" + tag);
    res.count(std::fabs(nrm2(scaled_inst.ystar()) - cs.ry) <= 1e-8 * cs.ry,
              "||y*|| != ry" + tag);

    // saddle of the scaled instance: gradients vanish
    Vec gx, gy;
    scaled_inst.grad(scaled_inst.xstar(), scaled_inst.ystar(), gx, gy);
    double scale = std::max(1.0, nrm2(scaled_inst.xstar()));
    res.count(nrm2(gx) <= 1e-8 * scale && nrm2(gy) <= 1e-8 * scale,
              "scaled saddle gradient residual" + tag);

    // block Lipschitz constants stay below the originals (power iteration)
    const ScalingReduction& s = scaled_inst.reduction();
    const PureInstance& base = scaled_inst.base();
    double bx = base.rate().bx, by = base.rate().by;
    double mux = base.params().mu_x, muy = base.params().mu_y;
    double lxx =
        s.a * s.c * s.c *
        power_iteration([&](const Vec& v) { return apply_shifted_A2(bx, mux, v); },
                        n, 300, 11);
    double lyy =
        s.a * s.d * s.d *
        power_iteration([&](const Vec& v) { return apply_shifted_A2(by, muy, v); },
                        n, 300, 12);
    double lcc = s.a * s.c * s.d * 0.5 * lxy *
                 power_iteration([&](const Vec& v) { return apply_A(v); }, n,
                                 300, 13);
    res.count(lxx <= lx + 1e-9, "scaled Lx = " + fmt(lxx) + " above" + tag);
    res.count(lyy <= ly + 1e-9, "scaled Ly = " + fmt(lyy) + " above" + tag);
    res.count(lcc <= lxy + 1e-9, "scaled Lxy = " + fmt(lcc) + " above" + tag);

    // gap at the scaled saddle is zero
    double gap = scaled_inst.duality_gap(scaled_inst.xstar(), scaled_inst.ystar());
    res.count(std::fabs(gap) <= 1e-8 * std::max(1.0, std::fabs(scaled_inst.value(
                                          scaled_inst.xstar(), scaled_inst.ystar()))),
              "scaled saddle gap" + tag);
  }
  return res;
}

SuiteResult bounds_invariants(int count) {
  SuiteResult res;
  res.name = "bounds-invariants";

  auto bg = bilinear_grid(count, 0);
  for (const auto& p : bg) {
    RateCertificate c = prox_rate_q(p);
    std::string tag = " at Lxy=" + fmt(p.lxy) + " mux=" + fmt(p.mu_x) +
                      " muy=" + fmt(p.mu_y);
    res.count(c.q > 0.0 && c.q < 1.0, "q outside (0,1)" + tag);

    // closed form against the stable quadratic-root form
    double a = c.alpha;
    double root = 2.0 / (2.0 + a + std::sqrt(a * (a + 4.0)));
    res.count(std::fabs(c.q - root) <= 1e-12 * std::max(1.0, c.q),
              "closed form and root form disagree" + tag);

    res.count(std::fabs(bilinear_quadratic_residual(c)) <= 1e-12 *
                  std::max(1.0, 2.0 + c.alpha),
              "quadratic residual" + tag);

    // 1/ln(1/q) >= sqrt(kappa+1)/2 - 1/2
    double lhs = 1.0 / (-std::log1p(-c.one_minus_q));
    double kappa = p.kappa_xy();
    double rhs = 0.5 * kappa / (std::sqrt(kappa + 1.0) + 1.0);
    res.count(lhs >= rhs * (1.0 - 1e-12),
              "iteration chain 1/ln(1/q) >= sqrt(kappa+1)/2 - 1/2" + tag);

    // monotone in Lxy
    BilinearParams p2 = p;
    p2.lxy *= 1.5;
    res.count(prox_rate_q(p2).q > c.q, "q not increasing in Lxy" + tag);
  }

  auto gg = general_grid(count, 0);
  for (const auto& p : gg) {
    RateCertificate c = pure_rate_q(p);
    std::string tag = " at Lx=" + fmt(p.lx) + " Ly=" + fmt(p.ly) +
                      " Lxy=" + fmt(p.lxy);
    double ulp_slack = 8.0 * 2.220446049250313e-16;
    res.count(c.q > c.q_lo - ulp_slack && c.q < c.q_hi + ulp_slack,
              "q not inside bracket" + tag);
    GeneralParams p2 = p;
    p2.lxy *= 1.5;
    res.count(pure_rate_q(p2).q > c.q, "q not increasing in Lxy" + tag);
  }

  // iteration-count edges
  {
    BilinearParams p{2.0, 1.0, 1.0};
    RateCertificate c = prox_rate_q(p);
    res.count(lower_iter_count(c, 1.0, 0.5) == 0, "k(eps) at met target");
    RateCertificate half = c;
    half.q = 0.5;
    half.one_minus_q = 0.5;
    res.count(lower_iter_count(half, 1.0 / 1024.0, 1.0) == 10,
              "k(eps) at q = 1/2");
  }
  return res;
}

SuiteResult solution_invariants() {
  SuiteResult res;
  res.name = "solution-invariants";

  // residual display of the approximate dual solution
  {
    const double alpha = 1.0;
    const int n = 12;
    ApproxSolution ap = approx_y_star(alpha, n);
    Vec resid = apply_shifted_A2(1.0, alpha, ap.v);
    resid[0] -= 1.0;
    double qn1 = std::pow(ap.q, n + 1) / (1.0 - ap.q);
    resid[static_cast<std::size_t>(n - 1)] -= qn1;
    res.count(nrm_inf(resid) <= 1e-12,
              "(A^2 + a I) yhat - e1 != q^{n+1}/(1-q) e_n, err=" +
                  fmt(nrm_inf(resid)));
  }

  // saddle residuals and projection floors on moderate instances
  {
    BilinearParams p{2.0, 1.0, 1.0};
    RateCertificate c = prox_rate_q(p);
    int n = 64;
    BilinearInstance inst(p, n);
    SaddlePoint star = exact_saddle(inst);
    double scale = std::max(1.0, nrm2(star.y));
    res.count(star.grad_residual_x <= 1e-10 * scale &&
                  star.grad_residual_y <= 1e-10 * scale,
              "bilinear saddle stationarity");

    // even-round projection floors for the gap and the distance
    double ystar_sq = dot(star.y, star.y);
    bool ok_gap = true, ok_dist = true;
    for (int r = 2; r <= n / 4; r += 2) {
      Vec xproj = zeros(n);
      for (int i = n - r / 2; i < n; ++i)
        xproj[static_cast<std::size_t>(i)] = star.x[static_cast<std::size_t>(i)];
      Vec yproj = zeros(n);
      for (int i = 0; i < (r + 1) / 2; ++i)
        yproj[static_cast<std::size_t>(i)] = star.y[static_cast<std::size_t>(i)];
      double gap = inst.duality_gap(xproj, yproj);
      double gap_floor =
          std::pow(c.q, r) * p.mu_y * ystar_sq / 32.0;
      if (gap < gap_floor * (1.0 - 1e-9)) ok_gap = false;
      double dist = nrm2(sub(yproj, star.y));
      double dist_floor_sq = std::pow(c.q, r) * ystar_sq / 16.0;
      if (dist * dist < dist_floor_sq * (1.0 - 1e-12)) ok_dist = false;
    }
    res.count(ok_gap, "even-round projected gap floor");
    res.count(ok_dist, "even-round projected distance floor");
  }

  {
    GeneralParams p;
    p.lx = p.ly = p.lxy = 4.0;
    p.mu_x = p.mu_y = 1.0;
    int n = 64;
    PureInstance inst(p, n);
    SaddlePoint star = exact_saddle(inst);
    double scale = std::max(1.0, nrm2(star.x));
    res.count(star.grad_residual_x <= 1e-9 * scale &&
                  star.grad_residual_y <= 1e-9 * scale,
              "pure saddle stationarity");
    RateCertificate c = inst.rate();
    ApproxSolution ax = approx_x_star(c, n);
    double err = nrm2(sub(ax.v, star.x));
    res.count(err <= ax.bound * (1.0 + 1e-10),
              "||xhat - x*|| above the bound");
  }
  return res;
}

SuiteResult rotation_primitives(int n, std::uint64_t seed) {
  SuiteResult res;
  res.name = "rotation-primitives";
  Rng rng(seed);

  for (int trial = 0; trial < 20; ++trial) {
    // random nested subspaces: fixed (dim 3) inside target (dim 6)
    std::vector<Vec> gens;
    for (int i = 0; i < 6; ++i) gens.push_back(rng.gaussian_vec(n));
    auto target = orthonormalize(gens);
    std::vector<Vec> fixed(target.begin(), target.begin() + 3);
    Vec xbar = rng.gaussian_vec(n);

    Rotation g = build_fixing_rotation(fixed, target, xbar);
    for (const Vec& w : fixed) {
      double dev = nrm_inf(sub(g.apply(w), w));
      res.count(dev <= 1e-12, "fixed vector moved by " + fmt(dev));
    }
    Vec gx = g.apply(xbar);
    Vec rem = gx;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : target) axpy(-dot(b, rem), b, rem);
    res.count(nrm2(rem) <= 1e-10 * std::max(1.0, nrm2(xbar)),
              "rotated point left the target span by " + fmt(nrm2(rem)));
    res.count(std::fabs(nrm2(gx) - nrm2(xbar)) <=
                  1e-11 * std::max(1.0, nrm2(xbar)),
              "rotation changed the norm");
    if (n <= 64)
      res.count(orthogonality_residual(g, n) <= 1e-12,
                "fixing rotation not orthogonal");
  }

  // reflector composition equals the dense product
  {
    Rotation r;
    for (int i = 0; i < 3; ++i) {
      Vec u = rng.gaussian_vec(n);
      double nu = nrm2(u);
      for (double& x : u) x /= nu;
      r.push_reflector(u);
    }
    auto cols = r.dense(n);
    Vec v = rng.gaussian_vec(n);
    Vec direct = r.apply(v);
    Vec via_dense = zeros(n);
    for (int j = 0; j < n; ++j)
      axpy(v[static_cast<std::size_t>(j)], cols[static_cast<std::size_t>(j)],
           via_dense);
    res.count(nrm_inf(sub(direct, via_dense)) <= 1e-11 * std::max(1.0, nrm2(v)),
              "reflector list disagrees with dense product");
    res.count(orthogonality_residual(r, n) <= 1e-12,
              "triple reflector not orthogonal");
  }

  // rotated instance: chain rule against finite differences, value
  // preservation at the pulled-back saddle
  {
    BilinearParams p{2.0, 1.0, 1.0};
    BilinearInstance base(p, n);
    Rotation u, v;
    for (int i = 0; i < 2; ++i) {
      Vec a = rng.gaussian_vec(n);
      double na = nrm2(a);
      for (double& x : a) x /= na;
      u.push_reflector(a);
      Vec b = rng.gaussian_vec(n);
      double nb = nrm2(b);
      for (double& x : b) x /= nb;
      v.push_reflector(b);
    }
    RotatedInstance<BilinearInstance> rot(base, u, v);
    Vec x = rng.gaussian_vec(n), y = rng.gaussian_vec(n);
    Vec gx, gy;
    rot.grad(x, y, gx, gy);
    const double h = 1e-5;
    bool ok = true;
    for (int i = 0; i < 5; ++i) {
      Vec xp = x, xm = x;
      xp[static_cast<std::size_t>(i)] += h;
      xm[static_cast<std::size_t>(i)] -= h;
      double fd = (rot.value(xp, y) - rot.value(xm, y)) / (2.0 * h);
      if (std::fabs(fd - gx[static_cast<std::size_t>(i)]) >
          1e-6 * std::max(1.0, std::fabs(fd)))
        ok = false;
    }
    res.count(ok, "rotated gradient disagrees with finite differences");

    SaddlePoint star = exact_saddle(base);
    double val_base = base.value(star.x, star.y);
    double val_rot = rot.value(rot.pull_back_x(star.x), rot.pull_back_y(star.y));
    res.count(std::fabs(val_base - val_rot) <= 1e-9 * std::max(1.0, std::fabs(val_base)),
              "rotation changed the saddle value");
    double gap_rot = rot.duality_gap(rot.pull_back_x(star.x), rot.pull_back_y(star.y));
    res.count(std::fabs(gap_rot) <= 1e-9, "rotated saddle gap nonzero");
  }
  return res;
}

}  // namespace checks

}  // namespace saddlelab
