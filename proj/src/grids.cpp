#include "saddlelab/grids.hpp"

#include <cmath>

namespace saddlelab {

namespace {

std::vector<double> ladder() {
  // 7 log-spaced points over [1e-3, 1e3]
  std::vector<double> v;
  for (int i = 0; i <= 6; ++i) v.push_back(std::pow(10.0, -3.0 + i));
  return v;
}

}  // namespace

std::vector<BilinearParams> bilinear_grid(int count, int dim_cap) {
  const std::vector<double> g = ladder();
  const int m = static_cast<int>(g.size());
  std::vector<BilinearParams> all;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) {
        BilinearParams p{g[static_cast<std::size_t>(i)],
                         g[static_cast<std::size_t>(j)],
                         g[static_cast<std::size_t>(l)]};
        if (dim_cap > 0) {
          RateCertificate c = prox_rate_q(p);
          if (min_dim_bilinear(c, 0) > dim_cap) continue;
        }
        all.push_back(p);
      }
  std::vector<BilinearParams> out;
  if (all.empty()) return out;
  double stride = static_cast<double>(all.size()) / count;
  for (int i = 0; i < count; ++i) {
    std::size_t idx = static_cast<std::size_t>(i * stride);
    if (idx >= all.size()) idx = all.size() - 1;
    out.push_back(all[idx]);
  }
  return out;
}

std::vector<GeneralParams> general_grid(int count, int dim_cap) {
  const std::vector<double> g = ladder();
  const int m = static_cast<int>(g.size());
  std::vector<GeneralParams> all;
  for (int ix = 0; ix < m; ++ix)
    for (int iy = 0; iy < m; ++iy)
      for (int il = 0; il < m; ++il)
        for (int mx = 0; mx < m; ++mx)
          for (int my = 0; my < m; ++my) {
            GeneralParams p;
            p.lx = g[static_cast<std::size_t>(ix)];
            p.ly = g[static_cast<std::size_t>(iy)];
            p.lxy = g[static_cast<std::size_t>(il)];
            p.mu_x = g[static_cast<std::size_t>(mx)];
            p.mu_y = g[static_cast<std::size_t>(my)];
            if (!(p.lx > p.mu_x && p.ly > p.mu_y)) continue;
            if (dim_cap > 0) {
              RateCertificate c = pure_rate_q(p);
              if (min_dim_pure(c, 0) > dim_cap) continue;
            }
            all.push_back(p);
          }
  std::vector<GeneralParams> out;
  if (all.empty()) return out;
  double stride = static_cast<double>(all.size()) / count;
  for (int i = 0; i < count; ++i) {
    std::size_t idx = static_cast<std::size_t>(i * stride);
    if (idx >= all.size()) idx = all.size() - 1;
    out.push_back(all[idx]);
  }
  return out;
}

}  // namespace saddlelab
