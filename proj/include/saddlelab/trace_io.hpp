#pragma once

#include <string>

#include <json.hpp>

#include "saddlelab/solvers.hpp"

namespace saddlelab {

/// CSV schema: k,gap,dist_x,dist_y,prefix_x,prefix_y,grad_calls,prox_calls
/// with floats at 17 significant digits. Written atomically (tmp+rename).
void write_trace_csv(const std::string& path, const IterateTrace& t);

/// Atomic JSON write with a trailing newline.
void write_json_atomic(const std::string& path, const nlohmann::json& j);

/// Per-solver entry of the comparison report.
struct SolverComparison {
  std::string solver;
  double fitted_rate = 0.0;  // per-iteration contraction of the fitted dist
  double q = 0.0;
  double log_rate_ratio = 0.0;     // ln(1/rho) / ln(1/q)
  double optimality_factor = 0.0;  // ln(1/q) / ln(1/rho)
  long k_lower = 0;
  long k_empirical = -1;
  long envelope_violations = 0;
  long span_violations = 0;
  long grad_calls = 0;
  long prox_calls = 0;
};

nlohmann::json comparison_entry_json(const SolverComparison& c);

}  // namespace saddlelab
