#include "saddlelab/adversary.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "saddlelab/structured.hpp"

namespace saddlelab {

ProxGameOracle::ProxGameOracle(const BilinearInstance& base, const Rotation& u,
                               const Rotation& v)
    : base_(&base), u_(&u), v_(&v), vtb_(v.apply_transpose(base.b())) {}

Vec ProxGameOracle::couple_x(const Vec& y) const {
  return u_->apply_transpose(base_->coupling_apply(v_->apply(y)));
}

Vec ProxGameOracle::couple_y(const Vec& x) const {
  return v_->apply_transpose(base_->coupling_apply(u_->apply(x)));
}

Vec ProxGameOracle::prox_f(double gamma, const Vec& center) const {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_f: step > 0");
  return scaled(center, 1.0 / (1.0 + gamma * base_->params().mu_x));
}

Vec ProxGameOracle::prox_g(double sigma, const Vec& center) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("prox_g: step > 0");
  Vec r = center;
  axpy(-sigma, vtb_, r);
  return scaled(r, 1.0 / (1.0 + sigma * base_->params().mu_y));
}

PureGameOracle::PureGameOracle(const PureInstance& base, const Rotation& u,
                               const Rotation& v)
    : base_(&base), u_(&u), v_(&v) {}

void PureGameOracle::grad(const Vec& x, const Vec& y, Vec& gx, Vec& gy) const {
  Vec bx, by;
  base_->grad(u_->apply(x), v_->apply(y), bx, by);
  gx = u_->apply_transpose(bx);
  gy = v_->apply_transpose(by);
}

namespace {

std::vector<Vec> even_power_chain(const Vec& seed, int count) {
  std::vector<Vec> gens;
  if (count <= 0) return gens;
  gens.reserve(static_cast<std::size_t>(count));
  Vec v = seed;
  for (int i = 0; i < count; ++i) {
    gens.push_back(v);
    if (i + 1 < count) v = apply_A2(v);
  }
  return gens;
}

}  // namespace

std::vector<Vec> span_gens_y_bilinear(const Vec& b, int m) {
  return even_power_chain(b, (m + 1) / 2);
}

std::vector<Vec> span_gens_x_bilinear(const Vec& b, int m) {
  if (m <= 1) return {};
  return even_power_chain(apply_A(b), m / 2);
}

std::vector<Vec> span_gens_y_pure(const Vec& b, int m) {
  return even_power_chain(b, m);
}

std::vector<Vec> span_gens_x_pure(const Vec& b, int m) {
  if (m <= 1) return {};
  return even_power_chain(apply_A(b), m - 1);
}

namespace {

std::vector<Vec> pull_back(const Rotation& r, const std::vector<Vec>& onb) {
  std::vector<Vec> out;
  out.reserve(onb.size());
  for (const Vec& v : onb) out.push_back(r.apply_transpose(v));
  return out;
}

double trace_mismatch(const GameTrace& a, const GameTrace& b,
                      std::size_t count) {
  double worst = 0.0;
  for (std::size_t i = 0; i < count && i < b.xs.size(); ++i) {
    double scale = std::max({1.0, nrm_inf(a.xs[i]), nrm_inf(a.ys[i])});
    worst = std::max(worst, nrm_inf(sub(a.xs[i], b.xs[i])) / scale);
    worst = std::max(worst, nrm_inf(sub(a.ys[i], b.ys[i])) / scale);
  }
  return worst;
}

double out_mismatch(const GameTrace& a, const GameTrace& b) {
  double scale = std::max({1.0, nrm_inf(a.x_out), nrm_inf(a.y_out)});
  return std::max(nrm_inf(sub(a.x_out, b.x_out)),
                  nrm_inf(sub(a.y_out, b.y_out))) /
         scale;
}

bool bits_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  return a.empty() ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool bits_equal(const GameTrace& a, const GameTrace& b) {
  if (a.xs.size() != b.xs.size() || a.ys.size() != b.ys.size()) return false;
  for (std::size_t i = 0; i < a.xs.size(); ++i)
    if (!bits_equal(a.xs[i], b.xs[i]) || !bits_equal(a.ys[i], b.ys[i]))
      return false;
  return bits_equal(a.x_out, b.x_out) && bits_equal(a.y_out, b.y_out);
}

void validate_trace(const GameTrace& tr, int rounds, int n) {
  if (static_cast<int>(tr.xs.size()) != rounds + 1 ||
      static_cast<int>(tr.ys.size()) != rounds + 1)
    throw std::runtime_error(
        "rotation game: player must record iterates 0..rounds");
  for (const Vec& v : tr.xs) require_dim(v, n, "game trace x");
  for (const Vec& v : tr.ys) require_dim(v, n, "game trace y");
  require_dim(tr.x_out, n, "game trace x_out");
  require_dim(tr.y_out, n, "game trace y_out");
}

using GensFn = std::vector<Vec> (*)(const Vec&, int);

/// Shared game loop. idx_fixed/idx_target give the history indices whose
/// spans are held fixed resp. extended at round j; the output step uses
/// the final-round indices (out_fixed, out_target). The bound is
/// evaluated on the y side for the bilinear game and the x side for the
/// pure game.
template <class Oracle, class Instance, class Player>
GameReport run_game(const Player& alg, const Instance& base,
                    const SaddlePoint& star, double q, int k, int n,
                    int (*idx_fixed)(int), int (*idx_target)(int),
                    int out_fixed, int out_target, GensFn gens_x,
                    GensFn gens_y, bool bound_on_y) {
  GameReport rep;
  rep.rounds = k;
  rep.n = n;
  rep.q = q;

  Rotation u, v;
  GameTrace prev;
  prev.xs.assign(1, zeros(n));
  prev.ys.assign(1, zeros(n));
  prev.x_out = zeros(n);
  prev.y_out = zeros(n);
  double replay_err = 0.0;

  auto rotate_side = [&](Rotation& rot, GensFn gens, int mf, int mt,
                         const Vec& newest) {
    auto fixed = orthonormalize(gens(base.b(), mf));
    auto target = orthonormalize(gens(base.b(), mt));
    Rotation gamma = build_fixing_rotation(pull_back(rot, fixed),
                                           pull_back(rot, target), newest);
    rot.compose_right(gamma);
  };

  for (int j = 1; j <= k; ++j) {
    Oracle o(base, u, v);
    GameTrace tr = alg(o, j);
    validate_trace(tr, j, n);
    replay_err =
        std::max(replay_err, trace_mismatch(prev, tr, prev.xs.size()));
    rotate_side(u, gens_x, idx_fixed(j), idx_target(j),
                tr.xs[static_cast<std::size_t>(j)]);
    rotate_side(v, gens_y, idx_fixed(j), idx_target(j),
                tr.ys[static_cast<std::size_t>(j)]);
    prev = tr;
  }

  // output step: fix everything seen so far, pull the output pair in
  {
    Oracle o(base, u, v);
    GameTrace tr = alg(o, k);
    validate_trace(tr, k, n);
    replay_err =
        std::max(replay_err, trace_mismatch(prev, tr, prev.xs.size()));
    rotate_side(u, gens_x, out_fixed, out_target, tr.x_out);
    rotate_side(v, gens_y, out_fixed, out_target, tr.y_out);
    prev = tr;
  }

  // final instance: replay twice, bitwise
  Oracle o(base, u, v);
  GameTrace f1 = alg(o, k);
  GameTrace f2 = alg(o, k);
  validate_trace(f1, k, n);
  rep.bitwise_replay_ok = bits_equal(f1, f2);
  if (!rep.bitwise_replay_ok)
    throw std::runtime_error(
        "rotation game: player is not deterministic (bitwise replay "
        "mismatch at the final instance)");
  replay_err = std::max(replay_err, trace_mismatch(prev, f1, prev.xs.size()));
  replay_err = std::max(replay_err, out_mismatch(prev, f1));
  rep.replay_max_err = replay_err;
  rep.replay_ok = replay_err <= 1e-11;
  if (!rep.replay_ok)
    rep.violations.push_back("replay identity exceeded tolerance: " +
                             std::to_string(replay_err));

  const Vec& vstar = bound_on_y ? star.y : star.x;
  Vec mapped = bound_on_y ? v.apply(f1.y_out) : u.apply(f1.x_out);
  double lhs = 0.0;
  {
    Vec diff = sub(mapped, vstar);
    lhs = dot(diff, diff);
  }
  rep.achieved_lhs = lhs;
  rep.bound_rhs =
      std::pow(q, 4.0 * k + 2.0) / 16.0 * dot(vstar, vstar);
  rep.bound_holds = lhs >= rep.bound_rhs * (1.0 - 1e-12);
  if (!rep.bound_holds)
    rep.violations.push_back("final distance fell below the q^{4k+2}/16 bound");

  if (n <= 64) {
    rep.orth_residual_u = orthogonality_residual(u, n);
    rep.orth_residual_v = orthogonality_residual(v, n);
    if (rep.orth_residual_u > 1e-12 || rep.orth_residual_v > 1e-12)
      rep.violations.push_back("rotation lost orthogonality");
  }
  if (bound_on_y) {
    rep.b_fix_residual = nrm_inf(sub(v.apply(base.b()), base.b())) +
                         nrm_inf(sub(v.apply_transpose(base.b()), base.b()));
    double scale = std::max(1.0, nrm_inf(base.b()));
    if (rep.b_fix_residual > 1e-11 * scale)
      rep.violations.push_back("V failed to fix the linear term b");
  }
  rep.u = u;
  rep.v = v;
  return rep;
}

}  // namespace

GameReport run_rotation_game_prox(const ProxPlayer& alg,
                                  const BilinearParams& p, int k, int n) {
  p.validate();
  if (k < 1) throw std::invalid_argument("rotation game: k >= 1");
  RateCertificate cert = prox_rate_q(p);
  int needed = std::max(2 * (2 * k + 1), min_dim_bilinear(cert, 0));
  if (n < needed)
    throw std::invalid_argument(
        "rotation game: n = " + std::to_string(n) +
        " too small for k = " + std::to_string(k) +
        " rounds; need n >= " + std::to_string(needed));
  BilinearInstance base(p, n);
  SaddlePoint star = exact_saddle(base);
  return run_game<ProxGameOracle>(
      alg, base, star, cert.q, k, n, [](int j) { return 4 * j - 3; },
      [](int j) { return 4 * j - 1; }, 4 * k - 1, 4 * k + 1,
      &span_gens_x_bilinear, &span_gens_y_bilinear, /*bound_on_y=*/true);
}

GameReport run_rotation_game_pure(const PurePlayer& alg,
                                  const GeneralParams& p, int k, int n) {
  p.validate();
  if (k < 1) throw std::invalid_argument("rotation game: k >= 1");
  RateCertificate cert = pure_rate_q(p);
  int needed = std::max(2 * (2 * k + 1), min_dim_pure(cert, 0));
  if (n < needed)
    throw std::invalid_argument(
        "rotation game: n = " + std::to_string(n) +
        " too small for k = " + std::to_string(k) +
        " rounds; need n >= " + std::to_string(needed));
  PureInstance base(p, n);
  SaddlePoint star = exact_saddle(base);
  return run_game<PureGameOracle>(
      alg, base, star, cert.q, k, n, [](int j) { return 2 * j - 1; },
      [](int j) { return 2 * j; }, 2 * k, 2 * k + 1, &span_gens_x_pure,
      &span_gens_y_pure, /*bound_on_y=*/false);
}

namespace {

/// squared coordinate reversal, normalized: the non-span ingredient of
/// the toy players. The square breaks linearity and the reversal breaks
/// coordinate alignment, so iterates genuinely leave the search spans.
Vec sq_reversed(const Vec& v) {
  const std::size_t n = v.size();
  Vec w(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = v[n - 1 - i];
    w[i] = x * x;
  }
  double nw = nrm2(w);
  return scaled(w, 1.0 / (1.0 + nw));
}

}  // namespace

ProxPlayer make_cp_player() {
  return [](const ProxGameOracle& o, int rounds) {
    const BilinearParams& p = o.params();
    const double gamma = std::sqrt(p.mu_y / p.mu_x) / p.lxy;
    const double sigma = std::sqrt(p.mu_x / p.mu_y) / p.lxy;
    const double theta = p.lxy / (2.0 * std::sqrt(p.mu_x * p.mu_y) + p.lxy);
    const int n = o.dim();
    GameTrace tr;
    Vec x = zeros(n), y = zeros(n), xt = x;
    tr.xs.push_back(x);
    tr.ys.push_back(y);
    for (int k = 1; k <= rounds; ++k) {
      y = o.prox_g(sigma, add(y, scaled(o.couple_y(xt), sigma)));
      Vec xn = o.prox_f(gamma, sub(x, scaled(o.couple_x(y), gamma)));
      xt = xn;
      axpy(theta, sub(xn, x), xt);
      x = xn;
      tr.xs.push_back(x);
      tr.ys.push_back(y);
    }
    tr.x_out = x;
    tr.y_out = y;
    return tr;
  };
}

ProxPlayer make_toy_nonspan_prox_player() {
  return [](const ProxGameOracle& o, int rounds) {
    const int n = o.dim();
    GameTrace tr;
    Vec x = zeros(n), y = zeros(n);
    Vec sum_ay = zeros(n), sum_ax = zeros(n);
    tr.xs.push_back(x);
    tr.ys.push_back(y);
    for (int k = 1; k <= rounds; ++k) {
      // oracle replies at the previous iterates only
      axpy(1.0, o.couple_x(y), sum_ay);
      axpy(1.0, o.couple_y(x), sum_ax);
      Vec px = o.prox_f(0.7, add(x, sum_ay));
      Vec py = o.prox_g(0.6, add(y, sum_ax));
      x = add(px, scaled(sq_reversed(sum_ay), 0.3));
      y = add(py, scaled(sq_reversed(sum_ax), 0.3));
      tr.xs.push_back(x);
      tr.ys.push_back(y);
    }
    tr.x_out = x;
    tr.y_out = y;
    return tr;
  };
}

PurePlayer make_eg_player() {
  return [](const PureGameOracle& o, int rounds) {
    const GeneralParams& p = o.params();
    const double eta = 1.0 / (4.0 * p.l_max());
    const int n = o.dim();
    GameTrace tr;
    Vec xc = zeros(n), yc = zeros(n);  // committed pair
    tr.xs.push_back(xc);
    tr.ys.push_back(yc);
    Vec gx, gy;
    for (int r = 1; r <= rounds; ++r) {
      // query at the most recent iterate (committed point on odd rounds,
      // midpoint on even rounds)
      o.grad(tr.xs.back(), tr.ys.back(), gx, gy);
      Vec nx = xc, ny = yc;
      axpy(-eta, gx, nx);
      axpy(eta, gy, ny);
      if (r % 2 == 0) {
        xc = nx;
        yc = ny;
      }
      tr.xs.push_back(nx);
      tr.ys.push_back(ny);
    }
    tr.x_out = xc;
    tr.y_out = yc;
    return tr;
  };
}

PurePlayer make_toy_nonspan_pure_player() {
  return [](const PureGameOracle& o, int rounds) {
    const int n = o.dim();
    GameTrace tr;
    Vec x = zeros(n), y = zeros(n);
    Vec sgx = zeros(n), sgy = zeros(n);
    tr.xs.push_back(x);
    tr.ys.push_back(y);
    Vec gx, gy;
    for (int r = 1; r <= rounds; ++r) {
      o.grad(x, y, gx, gy);
      axpy(1.0, gx, sgx);
      axpy(1.0, gy, sgy);
      axpy(-0.05, gx, x);
      axpy(0.05, gy, y);
      axpy(0.2, sq_reversed(sgx), x);
      axpy(0.2, sq_reversed(sgy), y);
      tr.xs.push_back(x);
      tr.ys.push_back(y);
    }
    tr.x_out = x;
    tr.y_out = y;
    return tr;
  };
}

}  // namespace saddlelab
