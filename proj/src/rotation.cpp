#include "saddlelab/rotation.hpp"

#include <cmath>
#include <stdexcept>

namespace saddlelab {

void Rotation::reflect(const Vec& u, Vec& v) {
  double t = 2.0 * dot(u, v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= t * u[i];
}

Vec Rotation::apply(const Vec& v) const {
  Vec r = v;
  for (auto it = us_.rbegin(); it != us_.rend(); ++it) reflect(*it, r);
  return r;
}

Vec Rotation::apply_transpose(const Vec& v) const {
  Vec r = v;
  for (const Vec& u : us_) reflect(u, r);
  return r;
}

std::vector<Vec> Rotation::dense(int n) const {
  std::vector<Vec> cols;
  cols.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) cols.push_back(apply(unit(n, j)));
  return cols;
}

double orthogonality_residual(const Rotation& r, int n) {
  std::vector<Vec> cols = r.dense(n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double g = dot(cols[static_cast<std::size_t>(i)],
                     cols[static_cast<std::size_t>(j)]);
      if (i == j) g -= 1.0;
      worst = std::max(worst, std::fabs(g));
    }
  return worst;
}

std::vector<Vec> orthonormalize(const std::vector<Vec>& gens, double tol) {
  std::vector<Vec> basis;
  for (const Vec& g : gens) {
    Vec v = g;
    double scale = std::max(1.0, nrm2(g));
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) axpy(-dot(b, v), b, v);
    double nv = nrm2(v);
    if (nv <= tol * scale) continue;  // dependent direction
    for (double& x : v) x /= nv;
    basis.push_back(std::move(v));
  }
  return basis;
}

Rotation build_fixing_rotation(const std::vector<Vec>& fixed_onb,
                               const std::vector<Vec>& target_onb,
                               const Vec& xbar) {
  Rotation gamma;

  // already in the target span: identity suffices
  Vec rem = xbar;
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& b : target_onb) axpy(-dot(b, rem), b, rem);
  if (nrm2(rem) <= 1e-10 * std::max(1.0, nrm2(xbar))) return gamma;

  // component of xbar orthogonal to the fixed span
  Vec w = xbar;
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& b : fixed_onb) axpy(-dot(b, w), b, w);
  double nw = nrm2(w);
  if (nw <= 1e-14 * std::max(1.0, nrm2(xbar)))
    return gamma;  // xbar is in the fixed span itself

  // unit direction of target inside fixed^perp
  std::vector<Vec> pool = fixed_onb;
  Vec z;
  double best = 0.0;
  for (const Vec& t : target_onb) {
    Vec c = t;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : pool) axpy(-dot(b, c), b, c);
    double nc = nrm2(c);
    if (nc > best) {
      best = nc;
      z = c;
    }
  }
  if (best <= 1e-10)
    throw std::invalid_argument(
        "build_fixing_rotation: target span adds no direction beyond the "
        "fixed span, rotation impossible");
  for (double& x : z) x /= best;

  Vec a = scaled(w, 1.0 / nw);
  if (dot(a, z) < 0.0) for (double& x : z) x = -x;

  Vec u = sub(a, z);
  double nu = nrm2(u);
  if (nu <= 1e-14) return gamma;  // a == z already
  for (double& x : u) x /= nu;
  gamma.push_reflector(std::move(u));
  return gamma;
}

}  // namespace saddlelab
