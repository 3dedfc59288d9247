#include "saddlelab/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace saddlelab {

const char* solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::gda:
      return "gda";
    case SolverKind::eg:
      return "eg";
    case SolverKind::ade:
      return "ade";
    case SolverKind::cp:
      return "cp";
    case SolverKind::double_loop:
      return "double-loop";
  }
  return "?";
}

SolverKind solver_from_name(const std::string& name) {
  if (name == "gda") return SolverKind::gda;
  if (name == "eg") return SolverKind::eg;
  if (name == "ade") return SolverKind::ade;
  if (name == "cp") return SolverKind::cp;
  if (name == "double-loop" || name == "double_loop")
    return SolverKind::double_loop;
  throw std::invalid_argument("unknown solver: " + name);
}

namespace {

void fill_single_loop(SolverConfig& c, double l, double mu) {
  c.eta1 = mu / (4.0 * l * l);
  c.eta2 = 1.0 / (4.0 * l);
  c.eta3 = 1.0 / (3.0 * l);
  c.ade_mix_mu = mu / (l + mu);
  c.ade_mix_l = l / (l + mu);
}

double strong_momentum(double kappa) {
  double s = std::sqrt(kappa);
  return (s - 1.0) / (s + 1.0);
}

}  // namespace

SolverConfig make_config(SolverKind kind, const GeneralParams& p) {
  p.validate();
  SolverConfig c;
  c.kind = kind;
  fill_single_loop(c, p.l_max(), p.mu_min());
  if (kind == SolverKind::cp) {
    if (!(p.lxy > 0.0))
      throw std::invalid_argument("make_config: cp requires Lxy > 0");
    c.gamma = std::sqrt(p.mu_y / p.mu_x) / p.lxy;
    c.sigma = std::sqrt(p.mu_x / p.mu_y) / p.lxy;
    c.theta = p.lxy / (2.0 * std::sqrt(p.mu_x * p.mu_y) + p.lxy);
  }
  if (kind == SolverKind::double_loop) {
    double l_phi_x = p.lx + p.lxy * p.lxy / p.mu_y;
    c.eta_outer = 1.0 / l_phi_x;
    c.eta_inner = 1.0 / p.ly;
    c.momentum_outer = strong_momentum(l_phi_x / p.mu_x);
    c.momentum_inner = strong_momentum(p.ly / p.mu_y);
  }
  return c;
}

SolverConfig make_config(SolverKind kind, const BilinearParams& p) {
  p.validate();
  // the bilinear worst instance seen as a general-class member has
  // Lx = mu_x and Ly = mu_y
  GeneralParams g;
  g.lx = p.mu_x;
  g.ly = p.mu_y;
  g.lxy = p.lxy;
  g.mu_x = p.mu_x;
  g.mu_y = p.mu_y;
  return make_config(kind, g);
}

void SpanMonitor::check(const char* what, const Vec& v, int allowed) {
  int pfx = support_prefix(v);
  if (pfx > allowed)
    violations_.push_back(SpanViolation{rounds_, what, pfx, allowed});
}

void SpanMonitor::on_grad(const Vec& xq, const Vec& yq, const Vec& gx,
                          const Vec& gy) {
  if (kind_ == Kind::pure) {
    check("grad query x", xq, static_cast<int>(rounds_));
    check("grad reply gx", gx, static_cast<int>(rounds_) + 1);
    (void)yq;
    (void)gy;
  } else {
    int allowed = static_cast<int>((rounds_ + 2) / 2);  // ceil((r+1)/2)
    check("grad query y", yq, allowed);
    check("grad reply gy", gy, allowed);
    (void)xq;
    (void)gx;
  }
  ++rounds_;
}

void SpanMonitor::on_prox_f(const Vec& center, const Vec& reply) {
  // x-side of the bilinear instance is suffix-supported; nothing to
  // assert on prefixes.
  (void)center;
  (void)reply;
  ++rounds_;
}

void SpanMonitor::on_prox_g(const Vec& center, const Vec& reply) {
  if (kind_ == Kind::bilinear) {
    int allowed = static_cast<int>((rounds_ + 2) / 2);
    check("prox_g center", center, allowed);
    check("prox_g reply", reply, allowed);
  }
  ++rounds_;
}

void SpanMonitor::on_iterate(long iter, const Vec& x, const Vec& y) {
  if (iter == 0) return;
  if (kind_ == Kind::pure)
    check("iterate x", x, static_cast<int>(rounds_));
  else
    check("iterate y", y, static_cast<int>((rounds_ + 1) / 2));
}

double fit_rate_per_iter(const IterateTrace& t, bool use_dist_y, long skip,
                         double tail_frac) {
  const long n = static_cast<long>(t.rows.size());
  long start = std::max(skip, n - static_cast<long>(tail_frac * n));
  // least squares of ln(dist) against the iteration index
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long m = 0;
  for (long i = start; i < n; ++i) {
    const TraceRow& r = t.rows[static_cast<std::size_t>(i)];
    double d = use_dist_y ? r.dist_y : r.dist_x;
    if (!(d > 0.0) || !std::isfinite(d)) continue;
    double lx = static_cast<double>(r.iter);
    double ly = std::log(d);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 3) return std::numeric_limits<double>::quiet_NaN();
  double denom = m * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  double slope = (m * sxy - sx * sy) / denom;
  return std::exp(slope);
}

namespace {

EnvelopeCheck check_envelope(const IterateTrace& t, double q, double dist0,
                             int n, bool bilinear) {
  EnvelopeCheck e;
  const double d0sq = dist0 * dist0;
  for (const TraceRow& r : t.rows) {
    if (r.class_round > n / 4) break;
    long expo = bilinear ? 2 * (r.class_round / 2) : 2 * r.class_round;
    double floor_sq =
        std::pow(q, static_cast<double>(expo)) / 16.0 * d0sq;
    double dist = bilinear ? r.dist_y : r.dist_x;
    double lhs = dist * dist;
    ++e.checked;
    double margin = lhs - floor_sq * (1.0 - 1e-12);
    e.min_margin = std::min(e.min_margin, margin);
    if (margin < 0.0) ++e.violations;
  }
  return e;
}

}  // namespace

EnvelopeCheck check_envelope_bilinear(const IterateTrace& t, double q,
                                      double dist0, int n) {
  return check_envelope(t, q, dist0, n, true);
}

EnvelopeCheck check_envelope_pure(const IterateTrace& t, double q,
                                  double dist0, int n) {
  return check_envelope(t, q, dist0, n, false);
}

long first_iter_below(const IterateTrace& t, double eps) {
  for (const TraceRow& r : t.rows)
    if (r.gap <= eps) return r.iter;
  return -1;
}

}  // namespace saddlelab
