#include "saddlelab/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace saddlelab {

namespace {

void rename_over(const std::string& tmp, const std::string& path) {
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("failed to move " + tmp + " to " + path);
}

}  // namespace

void write_trace_csv(const std::string& path, const IterateTrace& t) {
  const std::string tmp = path + ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    std::fputs("k,gap,dist_x,dist_y,prefix_x,prefix_y,grad_calls,prox_calls\n",
               f);
    for (const TraceRow& r : t.rows)
      std::fprintf(f, "%ld,%.17g,%.17g,%.17g,%d,%d,%ld,%ld\n", r.iter, r.gap,
                   r.dist_x, r.dist_y, r.prefix_x, r.prefix_y, r.grad_calls,
                   r.prox_calls);
    std::fclose(f);
  }
  rename_over(tmp, path);
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << j.dump(2) << "\n";
  }
  rename_over(tmp, path);
}

nlohmann::json comparison_entry_json(const SolverComparison& c) {
  return nlohmann::json{{"solver", c.solver},
                        {"fitted_rate", c.fitted_rate},
                        {"q", c.q},
                        {"log_rate_ratio", c.log_rate_ratio},
                        {"optimality_factor", c.optimality_factor},
                        {"k_lower", c.k_lower},
                        {"k_empirical", c.k_empirical},
                        {"envelope_violations", c.envelope_violations},
                        {"span_violations", c.span_violations},
                        {"grad_calls", c.grad_calls},
                        {"prox_calls", c.prox_calls}};
}

}  // namespace saddlelab
