#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "saddlelab/params.hpp"
#include "saddlelab/structured.hpp"
#include "saddlelab/vec.hpp"

namespace saddlelab {

enum class SolverKind { gda, eg, ade, cp, double_loop };

const char* solver_name(SolverKind k);
SolverKind solver_from_name(const std::string& name);

struct SolverConfig {
  SolverKind kind = SolverKind::gda;
  long max_iters = 1000;
  double eps_gap = 0.0;  // 0: run the full budget
  double divergence_factor = 10.0;

  // single-loop steps
  double eta1 = 0.0;  // gda
  double eta2 = 0.0;  // eg
  double eta3 = 0.0;  // ade
  double ade_mix_mu = 0.0;  // mu / (L + mu)
  double ade_mix_l = 0.0;   // L / (L + mu)

  // cp
  double gamma = 0.0;
  double sigma = 0.0;
  double theta = 0.0;

  // double loop
  long inner_iters = 10;  // T2
  double eta_outer = 0.0;
  double eta_inner = 0.0;
  double momentum_outer = 0.0;
  double momentum_inner = 0.0;
};

/// Defaults: eta1 = mu/(4L^2), eta2 = 1/(4L), eta3 = 1/(3L) with
/// L = max{Lx, Ly, Lxy}, mu = min{mu_x, mu_y}; CP per its published
/// constants; double-loop with 1/L steps and (sqrt(k)-1)/(sqrt(k)+1)
/// momentum on both loops.
SolverConfig make_config(SolverKind kind, const GeneralParams& p);
SolverConfig make_config(SolverKind kind, const BilinearParams& p);

struct TraceRow {
  long iter = 0;
  long class_round = 0;  // oracle rounds consumed when the iterate was formed
  double gap = 0.0;
  double dist_x = 0.0;
  double dist_y = 0.0;
  int prefix_x = 0;
  int prefix_y = 0;
  long grad_calls = 0;
  long prox_calls = 0;
};

struct IterateTrace {
  std::vector<TraceRow> rows;
  Vec x;
  Vec y;
  bool converged = false;
  bool diverged = false;
  long iters = 0;
  long grad_calls = 0;
  long prox_calls = 0;
};

struct SpanViolation {
  long round = 0;
  std::string what;
  int prefix = 0;
  int allowed = 0;
};

/// Checks every oracle exchange and iterate against the worst-case support
/// schedule: bilinear instances bound the y-side prefix by ceil(r/2) after
/// r oracle rounds, pure instances bound the x-side prefix by r.
class SpanMonitor {
 public:
  enum class Kind { bilinear, pure };

  explicit SpanMonitor(Kind k) : kind_(k) {}

  void on_grad(const Vec& xq, const Vec& yq, const Vec& gx, const Vec& gy);
  void on_prox_f(const Vec& center, const Vec& reply);
  void on_prox_g(const Vec& center, const Vec& reply);
  void on_iterate(long iter, const Vec& x, const Vec& y);

  long rounds() const { return rounds_; }
  const std::vector<SpanViolation>& violations() const { return violations_; }

 private:
  void check(const char* what, const Vec& v, int allowed);

  Kind kind_;
  long rounds_ = 0;
  std::vector<SpanViolation> violations_;
};

namespace detail {

struct RunState {
  IterateTrace trace;
  double gap0 = 0.0;
  long class_rounds = 0;

  template <class Inst>
  bool record(const Inst& inst, const Vec& xs, const Vec& ys, long iter,
              const Vec& x, const Vec& y, const SolverConfig& cfg,
              SpanMonitor* mon) {
    if (mon) mon->on_iterate(iter, x, y);
    TraceRow row;
    row.iter = iter;
    row.class_round = class_rounds;
    row.gap = inst.duality_gap(x, y);
    row.dist_x = nrm2(sub(x, xs));
    row.dist_y = nrm2(sub(y, ys));
    row.prefix_x = support_prefix(x);
    row.prefix_y = support_prefix(y);
    row.grad_calls = trace.grad_calls;
    row.prox_calls = trace.prox_calls;
    trace.rows.push_back(row);
    if (iter == 0) {
      gap0 = row.gap;
      return false;
    }
    if (cfg.eps_gap > 0.0 && row.gap <= cfg.eps_gap) {
      trace.converged = true;
      return true;
    }
    if (row.gap > cfg.divergence_factor * std::max(gap0, 1e-300) &&
        row.gap > gap0) {
      trace.diverged = true;
      return true;
    }
    return false;
  }
};

}  // namespace detail

/// Simultaneous gradient descent-ascent.
template <class Inst>
IterateTrace run_gda(const Inst& inst, const Vec& xstar, const Vec& ystar,
                     const SolverConfig& cfg, SpanMonitor* mon = nullptr,
                     const Vec* x0 = nullptr, const Vec* y0 = nullptr) {
  if (!(cfg.eta1 > 0.0)) throw std::invalid_argument("run_gda: eta1 > 0");
  const int n = inst.dim();
  detail::RunState st;
  Vec x = x0 ? *x0 : zeros(n);
  Vec y = y0 ? *y0 : zeros(n);
  Vec gx, gy;
  st.record(inst, xstar, ystar, 0, x, y, cfg, mon);
  for (long k = 1; k <= cfg.max_iters; ++k) {
    inst.grad(x, y, gx, gy);
    ++st.trace.grad_calls;
    ++st.class_rounds;
    if (mon) mon->on_grad(x, y, gx, gy);
    axpy(-cfg.eta1, gx, x);
    axpy(cfg.eta1, gy, y);
    st.trace.iters = k;
    if (st.record(inst, xstar, ystar, k, x, y, cfg, mon)) break;
  }
  st.trace.x = x;
  st.trace.y = y;
  return st.trace;
}

/// Extragradient: a look-ahead midpoint step, then the update from the
/// midpoint gradient. Two oracle rounds per iteration.
template <class Inst>
IterateTrace run_eg(const Inst& inst, const Vec& xstar, const Vec& ystar,
                    const SolverConfig& cfg, SpanMonitor* mon = nullptr,
                    const Vec* x0 = nullptr, const Vec* y0 = nullptr) {
  if (!(cfg.eta2 > 0.0)) throw std::invalid_argument("run_eg: eta2 > 0");
  const int n = inst.dim();
  detail::RunState st;
  Vec x = x0 ? *x0 : zeros(n);
  Vec y = y0 ? *y0 : zeros(n);
  Vec gx, gy, mgx, mgy;
  st.record(inst, xstar, ystar, 0, x, y, cfg, mon);
  for (long k = 1; k <= cfg.max_iters; ++k) {
    inst.grad(x, y, gx, gy);
    ++st.trace.grad_calls;
    ++st.class_rounds;
    if (mon) mon->on_grad(x, y, gx, gy);
    Vec xm = x, ym = y;
    axpy(-cfg.eta2, gx, xm);
    axpy(cfg.eta2, gy, ym);
    inst.grad(xm, ym, mgx, mgy);
    ++st.trace.grad_calls;
    ++st.class_rounds;
    if (mon) mon->on_grad(xm, ym, mgx, mgy);
    axpy(-cfg.eta2, mgx, x);
    axpy(cfg.eta2, mgy, y);
    st.trace.iters = k;
    if (st.record(inst, xstar, ystar, k, x, y, cfg, mon)) break;
  }
  st.trace.x = x;
  st.trace.y = y;
  return st.trace;
}

/// Accelerated dual extrapolation, simplified unconstrained form: EG-style
/// midpoints with eta3 and a mu/L mixture of the two gradients in the
/// update.
template <class Inst>
IterateTrace run_ade(const Inst& inst, const Vec& xstar, const Vec& ystar,
                     const SolverConfig& cfg, SpanMonitor* mon = nullptr,
                     const Vec* x0 = nullptr, const Vec* y0 = nullptr) {
  if (!(cfg.eta3 > 0.0)) throw std::invalid_argument("run_ade: eta3 > 0");
  if (!(cfg.ade_mix_mu > 0.0 && cfg.ade_mix_l > 0.0))
    throw std::invalid_argument("run_ade: mixing weights required");
  const int n = inst.dim();
  detail::RunState st;
  Vec x = x0 ? *x0 : zeros(n);
  Vec y = y0 ? *y0 : zeros(n);
  Vec gx, gy, mgx, mgy;
  st.record(inst, xstar, ystar, 0, x, y, cfg, mon);
  for (long k = 1; k <= cfg.max_iters; ++k) {
    inst.grad(x, y, gx, gy);
    ++st.trace.grad_calls;
    ++st.class_rounds;
    if (mon) mon->on_grad(x, y, gx, gy);
    Vec xm = x, ym = y;
    axpy(-cfg.eta3, gx, xm);
    axpy(cfg.eta3, gy, ym);
    inst.grad(xm, ym, mgx, mgy);
    ++st.trace.grad_calls;
    ++st.class_rounds;
    if (mon) mon->on_grad(xm, ym, mgx, mgy);
    for (int i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      x[u] -= cfg.eta3 * (cfg.ade_mix_mu * gx[u] + cfg.ade_mix_l * mgx[u]);
      y[u] += cfg.eta3 * (cfg.ade_mix_mu * gy[u] + cfg.ade_mix_l * mgy[u]);
    }
    st.trace.iters = k;
    if (st.record(inst, xstar, ystar, k, x, y, cfg, mon)) break;
  }
  st.trace.x = x;
  st.trace.y = y;
  return st.trace;
}

/// Primal-dual scheme with proximal oracles: y-prox against the
/// extrapolated x, x-prox, momentum extrapolation. One prox_f and one
/// prox_g per iteration.
template <class Inst>
IterateTrace run_cp(const Inst& inst, const Vec& xstar, const Vec& ystar,
                    const SolverConfig& cfg, SpanMonitor* mon = nullptr,
                    const Vec* x0 = nullptr, const Vec* y0 = nullptr) {
  if (!(cfg.gamma > 0.0 && cfg.sigma > 0.0))
    throw std::invalid_argument("run_cp: gamma, sigma > 0");
  if (!(cfg.theta >= 0.0)) throw std::invalid_argument("run_cp: theta >= 0");
  const int n = inst.dim();
  detail::RunState st;
  Vec x = x0 ? *x0 : zeros(n);
  Vec y = y0 ? *y0 : zeros(n);
  Vec xt = x;  // extrapolated point
  st.record(inst, xstar, ystar, 0, x, y, cfg, mon);
  for (long k = 1; k <= cfg.max_iters; ++k) {
    Vec cy = add(y, scaled(inst.coupling_apply(xt), cfg.sigma));
    Vec ynew = inst.prox_g(cfg.sigma, cy);
    ++st.trace.prox_calls;
    ++st.class_rounds;
    if (mon) mon->on_prox_g(cy, ynew);
    Vec cx = sub(x, scaled(inst.coupling_apply(ynew), cfg.gamma));
    Vec xnew = inst.prox_f(cfg.gamma, cx);
    ++st.trace.prox_calls;
    ++st.class_rounds;
    if (mon) mon->on_prox_f(cx, xnew);
    xt = xnew;
    axpy(cfg.theta, sub(xnew, x), xt);
    x = xnew;
    y = ynew;
    st.trace.iters = k;
    if (st.record(inst, xstar, ystar, k, x, y, cfg, mon)) break;
  }
  st.trace.x = x;
  st.trace.y = y;
  return st.trace;
}

/// Outer accelerated descent on x against an inner accelerated
/// maximization in y, warm-started at the previous inner solution.
template <class Inst>
IterateTrace run_double_loop(const Inst& inst, const Vec& xstar,
                             const Vec& ystar, const SolverConfig& cfg,
                             SpanMonitor* mon = nullptr,
                             const Vec* x0 = nullptr,
                             const Vec* y0 = nullptr) {
  if (!(cfg.eta_outer > 0.0 && cfg.eta_inner > 0.0))
    throw std::invalid_argument("run_double_loop: steps > 0");
  if (cfg.inner_iters < 1)
    throw std::invalid_argument("run_double_loop: T2 >= 1");
  const int n = inst.dim();
  detail::RunState st;
  Vec x = x0 ? *x0 : zeros(n);
  Vec y = y0 ? *y0 : zeros(n);
  Vec xbar = x;
  Vec gx, gy;
  st.record(inst, xstar, ystar, 0, x, y, cfg, mon);
  for (long k = 1; k <= cfg.max_iters; ++k) {
    // inner loop: maximize y at xbar, warm start at the previous y
    Vec w = y, wbar = y;
    for (long t = 0; t <= cfg.inner_iters; ++t) {
      inst.grad(xbar, wbar, gx, gy);
      ++st.trace.grad_calls;
      ++st.class_rounds;
      if (mon) mon->on_grad(xbar, wbar, gx, gy);
      Vec wnew = wbar;
      axpy(cfg.eta_inner, gy, wnew);
      wbar = wnew;
      axpy(cfg.momentum_inner, sub(wnew, w), wbar);
      w = wnew;
    }
    y = w;
    // outer accelerated step
    inst.grad(xbar, y, gx, gy);
    ++st.trace.grad_calls;
    ++st.class_rounds;
    if (mon) mon->on_grad(xbar, y, gx, gy);
    Vec xnew = xbar;
    axpy(-cfg.eta_outer, gx, xnew);
    xbar = xnew;
    axpy(cfg.momentum_outer, sub(xnew, x), xbar);
    x = xnew;
    st.trace.iters = k;
    if (st.record(inst, xstar, ystar, k, x, y, cfg, mon)) break;
  }
  st.trace.x = x;
  st.trace.y = y;
  return st.trace;
}

/// Least-squares slope of ln(dist) per iteration over the trailing
/// tail_frac of the trace, skipping the first `skip` rows. Returns the
/// per-iteration contraction factor exp(slope), or NaN when the window is
/// too short.
double fit_rate_per_iter(const IterateTrace& t, bool use_dist_y,
                         long skip = 10, double tail_frac = 0.5);

struct EnvelopeCheck {
  long violations = 0;
  long checked = 0;
  double min_margin = std::numeric_limits<double>::infinity();
};

/// dist_y^2 >= (q^{2 floor(r/2)} / 16) dist0^2 at every recorded row with
/// class round r <= n/4 (1e-12 relative slack).
EnvelopeCheck check_envelope_bilinear(const IterateTrace& t, double q,
                                      double dist0, int n);
/// dist_x^2 >= (q^{2r} / 16) dist0^2 for class rounds r <= n/4.
EnvelopeCheck check_envelope_pure(const IterateTrace& t, double q,
                                  double dist0, int n);

/// First recorded iteration whose gap is <= eps, or -1.
long first_iter_below(const IterateTrace& t, double eps);

}  // namespace saddlelab
