#pragma once

#include <vector>

#include "saddlelab/params.hpp"

namespace saddlelab {

/// Deterministic parameter grids for the property suites: each constant is
/// drawn from a log-spaced ladder over [1e-3, 1e3], combinations are
/// filtered by class validity, and, when dim_cap > 0, by the dimension the
/// distance lemmas would demand (keeps the instance-bearing suites at desk
/// scale). Tuples are strided through the full lattice so both
/// ill-conditioned and well-conditioned corners appear.
std::vector<BilinearParams> bilinear_grid(int count, int dim_cap = 0);
std::vector<GeneralParams> general_grid(int count, int dim_cap = 0);

}  // namespace saddlelab
