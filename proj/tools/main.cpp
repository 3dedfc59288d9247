// saddlelab: build worst-case saddle-point instances, run reference
// solvers with span instrumentation, verify the constructive property
// suites, and play the rotation adversary game.
//
// Exit codes: 0 all checks pass, 1 mathematical violation, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "saddlelab/adversary.hpp"
#include "saddlelab/checks.hpp"
#include "saddlelab/grids.hpp"
#include "saddlelab/instances.hpp"
#include "saddlelab/params.hpp"
#include "saddlelab/solutions.hpp"
#include "saddlelab/solvers.hpp"
#include "saddlelab/trace_io.hpp"

using namespace saddlelab;
using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

struct CommonOpts {
  std::string klass = "bilinear";
  int n = 0;
  double lx = 0.0, ly = 0.0, lxy = 0.0, mux = 0.0, muy = 0.0;
  double eps = 1e-6;
  long budget = 300;
  std::string out;
  std::uint64_t seed = 1;
  std::string spec_file;
};

json params_json(const CommonOpts& o) {
  if (o.klass == "bilinear")
    return json{{"lxy", o.lxy}, {"mu_x", o.mux}, {"mu_y", o.muy}};
  return json{{"lx", o.lx},
              {"ly", o.ly},
              {"lxy", o.lxy},
              {"mu_x", o.mux},
              {"mu_y", o.muy}};
}

BilinearParams bilinear_params(const CommonOpts& o) {
  BilinearParams p{o.lxy, o.mux, o.muy};
  p.validate();
  return p;
}

GeneralParams general_params(const CommonOpts& o) {
  GeneralParams p;
  p.lx = o.lx;
  p.ly = o.ly;
  p.lxy = o.lxy;
  p.mu_x = o.mux;
  p.mu_y = o.muy;
  p.validate();
  return p;
}

/// Overlay values from a JSON experiment spec for every flag the user did
/// not pass explicitly.
void apply_spec_file(CLI::App* cmd, CommonOpts& o) {
  if (o.spec_file.empty()) return;
  std::ifstream f(o.spec_file);
  if (!f) throw std::invalid_argument("cannot read spec file " + o.spec_file);
  json s = json::parse(f);
  auto unset = [&](const std::string& flag) {
    CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  if (s.contains("class") && unset("--class"))
    o.klass = s["class"].get<std::string>();
  if (s.contains("n") && unset("--n")) o.n = s["n"].get<int>();
  if (s.contains("eps") && unset("--eps")) o.eps = s["eps"].get<double>();
  if (s.contains("budget") && unset("--budget"))
    o.budget = s["budget"].get<long>();
  if (s.contains("out") && unset("--out")) o.out = s["out"].get<std::string>();
  if (s.contains("seed") && unset("--seed"))
    o.seed = s["seed"].get<std::uint64_t>();
  if (s.contains("params")) {
    const json& p = s["params"];
    if (p.contains("lx") && unset("--lx")) o.lx = p["lx"].get<double>();
    if (p.contains("ly") && unset("--ly")) o.ly = p["ly"].get<double>();
    if (p.contains("lxy") && unset("--lxy")) o.lxy = p["lxy"].get<double>();
    if (p.contains("mu_x") && unset("--mux")) o.mux = p["mu_x"].get<double>();
    if (p.contains("mu_y") && unset("--muy")) o.muy = p["mu_y"].get<double>();
  }
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--class", o.klass, "problem class: bilinear | general")
      ->check(CLI::IsMember({"bilinear", "general", "scaled-cc"}));
  cmd->add_option("--n", o.n, "instance dimension");
  cmd->add_option("--lx", o.lx, "Lx");
  cmd->add_option("--ly", o.ly, "Ly");
  cmd->add_option("--lxy", o.lxy, "Lxy");
  cmd->add_option("--mux", o.mux, "mu_x");
  cmd->add_option("--muy", o.muy, "mu_y");
  cmd->add_option("--eps", o.eps, "gap tolerance");
  cmd->add_option("--budget", o.budget, "iteration budget");
  cmd->add_option("--out", o.out, "output directory / file");
  cmd->add_option("--seed", o.seed, "seed for random test vectors");
  cmd->add_option("--spec", o.spec_file, "JSON experiment spec (flags win)");
}

int cmd_bounds(const CommonOpts& o, double gap0_flag, double rx, double ry,
               bool as_json) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["class"] = o.klass;
  out["params"] = params_json(o);
  out["eps"] = o.eps;

  if (o.klass == "scaled-cc") {
    // reduction to the merely convex-concave classes: closed-form budgets,
    // no certificate involved
    if (!(rx > 0.0 && ry > 0.0))
      throw std::invalid_argument("bounds: scaled-cc needs --rx and --ry");
    out["mu_x_derived"] = 64.0 * o.eps / (rx * rx);
    out["mu_y_derived"] = 64.0 * o.eps / (ry * ry);
    double three = cc_lower_bound_general(o.lx, o.ly, o.lxy, rx, ry, o.eps);
    double coup = cc_lower_bound_bilinear(o.lxy, rx, ry, o.eps);
    out["cc"] = json{{"rx", rx},
                     {"ry", ry},
                     {"general_three_term", three},
                     {"bilinear_coupling", coup}};
    if (as_json) {
      std::printf("%s\n", out.dump(2).c_str());
    } else {
      std::printf("class:           scaled-cc\n");
      std::printf("cc three-term:   %.12g\n", three);
      std::printf("cc coupling:     %.12g\n", coup);
    }
    return 0;
  }

  RateCertificate cert;
  double gap0 = gap0_flag;
  if (o.klass == "bilinear") {
    BilinearParams p = bilinear_params(o);
    cert = prox_rate_q(p);
    if (o.n > 0) {
      BilinearInstance inst(p, o.n);
      SaddlePoint s = exact_saddle(inst);
      gap0 = p.mu_y * dot(s.y, s.y) / 32.0;
      out["gap0_source"] = "mu_y ||y*||^2 / 32 at n";
    }
  } else {
    GeneralParams p = general_params(o);
    cert = pure_rate_q(p);
    out["beta"] = cert.beta;
    out["bx"] = cert.bx;
    out["by"] = cert.by;
    if (o.n > 0) {
      PureInstance inst(p, o.n);
      SaddlePoint s = exact_saddle(inst);
      gap0 = p.mu_x * dot(s.x, s.x) / 32.0;
      out["gap0_source"] = "mu_x ||x*||^2 / 32 at n";
    }
  }
  out["alpha"] = cert.alpha;
  out["q"] = cert.q;
  out["q_lo"] = cert.q_lo;
  out["q_hi"] = cert.q_hi;
  out["gap0"] = gap0;
  out["k_lower"] = lower_iter_count(cert, o.eps, gap0);

  if (rx > 0.0 && ry > 0.0) {
    out["cc"] = json{
        {"rx", rx},
        {"ry", ry},
        {"general_three_term",
         cc_lower_bound_general(o.lx, o.ly, o.lxy, rx, ry, o.eps)},
        {"bilinear_coupling", cc_lower_bound_bilinear(o.lxy, rx, ry, o.eps)}};
  }

  if (as_json) {
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("class:    %s\n", o.klass.c_str());
    std::printf("q:        %.12g  (bracket [%.12g, %.12g])\n", cert.q,
                cert.q_lo, cert.q_hi);
    if (cert.kind == RateKind::general)
      std::printf("alpha:    %.12g\nbeta:     %.12g\n", cert.alpha, cert.beta);
    else
      std::printf("alpha:    %.12g\n", cert.alpha);
    std::printf("gap0:     %.12g\n", gap0);
    std::printf("k(eps):   %ld at eps = %g\n",
                lower_iter_count(cert, o.eps, gap0), o.eps);
    if (out.contains("cc")) {
      std::printf("cc three-term:   %.12g\n",
                  out["cc"]["general_three_term"].get<double>());
      std::printf("cc coupling:     %.12g\n",
                  out["cc"]["bilinear_coupling"].get<double>());
    }
  }
  return 0;
}

int cmd_solve(const CommonOpts& o, const std::vector<std::string>& solvers) {
  if (o.out.empty()) throw std::invalid_argument("solve: --out DIR is required");
  if (o.n <= 0) throw std::invalid_argument("solve: --n is required");
  std::vector<std::string> names =
      !solvers.empty()
          ? solvers
          : std::vector<std::string>{o.klass == "bilinear" ? "cp" : "eg"};

  json report;
  report["schema_version"] = kSchemaVersion;
  report["class"] = o.klass;
  report["params"] = params_json(o);
  report["n"] = o.n;
  report["eps"] = o.eps;
  report["budget"] = o.budget;
  json entries = json::array();
  long total_violations = 0;

  auto push_entry = [&](const std::string& name, const RateCertificate& cert,
                        const IterateTrace& t, const SpanMonitor& mon,
                        long env_violations, double gap0, bool dist_y) {
    SolverComparison cmp;
    cmp.solver = name;
    cmp.fitted_rate = fit_rate_per_iter(t, dist_y);
    cmp.q = cert.q;
    cmp.log_rate_ratio =
        std::log(1.0 / cmp.fitted_rate) / std::log(1.0 / cert.q);
    cmp.optimality_factor = 1.0 / cmp.log_rate_ratio;
    cmp.k_lower = o.eps > 0.0 ? lower_iter_count(cert, o.eps, gap0) : 0;
    cmp.k_empirical = o.eps > 0.0 ? first_iter_below(t, o.eps) : -1;
    cmp.envelope_violations = env_violations;
    cmp.span_violations = static_cast<long>(mon.violations().size());
    cmp.grad_calls = t.grad_calls;
    cmp.prox_calls = t.prox_calls;
    total_violations += cmp.envelope_violations + cmp.span_violations;
    entries.push_back(comparison_entry_json(cmp));
    write_trace_csv(o.out + "/trace_" + name + ".csv", t);
  };

  if (o.klass == "bilinear") {
    BilinearParams p = bilinear_params(o);
    RateCertificate cert = prox_rate_q(p);
    int needed = min_dim_bilinear(cert, static_cast<int>(o.budget));
    if (o.n < needed)
      throw std::invalid_argument(
          "solve: n = " + std::to_string(o.n) + " is below the required n = " +
          std::to_string(needed) + " for budget " + std::to_string(o.budget));
    BilinearInstance inst(p, o.n);
    SaddlePoint star = exact_saddle(inst);
    double gap0 = p.mu_y * dot(star.y, star.y) / 32.0;
    report["gap0"] = gap0;
    for (const std::string& name : names) {
      SolverKind kind = solver_from_name(name);
      SolverConfig cfg = make_config(kind, p);
      cfg.max_iters = o.budget;
      cfg.eps_gap = o.eps;
      SpanMonitor mon(SpanMonitor::Kind::bilinear);
      IterateTrace t;
      switch (kind) {
        case SolverKind::cp:
          t = run_cp(inst, star.x, star.y, cfg, &mon);
          break;
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
          throw std::invalid_argument("solver " + name +
                                      " needs the general class");
      }
      EnvelopeCheck env =
          check_envelope_bilinear(t, cert.q, nrm2(star.y), o.n);
      push_entry(name, cert, t, mon, env.violations, gap0, /*dist_y=*/true);
    }
  } else {
    GeneralParams p = general_params(o);
    RateCertificate cert = pure_rate_q(p);
    int needed = min_dim_pure(cert, static_cast<int>(o.budget));
    if (o.n < needed)
      throw std::invalid_argument(
          "solve: n = " + std::to_string(o.n) + " is below the required n = " +
          std::to_string(needed) + " for budget " + std::to_string(o.budget));
    PureInstance inst(p, o.n);
    SaddlePoint star = exact_saddle(inst);
    double gap0 = p.mu_x * dot(star.x, star.x) / 32.0;
    report["gap0"] = gap0;
    for (const std::string& name : names) {
      SolverKind kind = solver_from_name(name);
      SolverConfig cfg = make_config(kind, p);
      cfg.max_iters = o.budget;
      cfg.eps_gap = o.eps;
      SpanMonitor mon(SpanMonitor::Kind::pure);
      IterateTrace t;
      switch (kind) {
        case SolverKind::gda:
          t = run_gda(inst, star.x, star.y, cfg, &mon);
          break;
        case SolverKind::eg:
          t = run_eg(inst, star.x, star.y, cfg, &mon);
          break;
        case SolverKind::ade:
          t = run_ade(inst, star.x, star.y, cfg, &mon);
          break;
        case SolverKind::double_loop:
          t = run_double_loop(inst, star.x, star.y, cfg, &mon);
          break;
        default:
          throw std::invalid_argument("solver " + name +
                                      " needs the bilinear class");
      }
      EnvelopeCheck env = check_envelope_pure(t, cert.q, nrm2(star.x), o.n);
      push_entry(name, cert, t, mon, env.violations, gap0, /*dist_y=*/false);
    }
  }

  report["solvers"] = entries;
  report["violations"] = total_violations;
  write_json_atomic(o.out + "/report.json", report);
  std::printf("%s\n", report.dump(2).c_str());
  return total_violations == 0 ? 0 : 1;
}

int cmd_verify(const std::string& suite, const CommonOpts& o) {
  std::vector<SuiteResult> results;
  bool all = suite == "all";
  int n = o.n > 0 ? o.n : 128;
  if (all || suite == "zero-chain")
    results.push_back(checks::zero_chain(n, o.seed));
  if (all || suite == "solutions") {
    results.push_back(checks::approx_bilinear_grid(100));
    results.push_back(checks::pure_kkt_grid(100));
    results.push_back(checks::distance_bounds_grid(100));
    results.push_back(checks::solution_invariants());
  }
  if (all || suite == "bounds") {
    results.push_back(checks::quartic_bracket_grid(100));
    results.push_back(checks::bounds_invariants(100));
  }
  if (all || suite == "rotation") {
    results.push_back(
        checks::rotation_primitives(o.n > 0 ? std::min(o.n, 64) : 32, o.seed));
    results.push_back(checks::rotation_games(64, 3));
  }

  long failed = 0;
  for (const SuiteResult& r : results) {
    std::printf("[%s] %-26s checks=%ld failures=%ld%s%s\n",
                r.pass() ? "PASS" : "FAIL", r.name.c_str(), r.checks,
                r.failures, r.detail.empty() ? "" : " : ", r.detail.c_str());
    if (!r.pass()) ++failed;
  }
  std::printf("%zu suites, %ld failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}

int cmd_adversary(const CommonOpts& o, const std::string& alg, int k) {
  GameReport rep;
  json jp = params_json(o);
  if (o.klass == "bilinear") {
    BilinearParams p = bilinear_params(o);
    if (alg == "cp")
      rep = run_rotation_game_prox(make_cp_player(), p, k, o.n);
    else if (alg == "toy-nonspan")
      rep = run_rotation_game_prox(make_toy_nonspan_prox_player(), p, k, o.n);
    else
      throw std::invalid_argument("adversary: unknown bilinear algorithm " +
                                  alg + " (cp | toy-nonspan)");
  } else {
    GeneralParams p = general_params(o);
    if (alg == "eg")
      rep = run_rotation_game_pure(make_eg_player(), p, k, o.n);
    else if (alg == "toy-nonspan")
      rep = run_rotation_game_pure(make_toy_nonspan_pure_player(), p, k, o.n);
    else
      throw std::invalid_argument("adversary: unknown general algorithm " +
                                  alg + " (eg | toy-nonspan)");
  }

  json out;
  out["schema_version"] = kSchemaVersion;
  out["k"] = rep.rounds;
  out["n"] = rep.n;
  out["class"] = o.klass;
  out["alg"] = alg;
  out["params"] = jp;
  out["q"] = rep.q;
  out["bound_rhs"] = rep.bound_rhs;
  out["achieved_lhs"] = rep.achieved_lhs;
  out["bound_holds"] = rep.bound_holds;
  out["replay_ok"] = rep.replay_ok;
  out["replay_max_err"] = rep.replay_max_err;
  out["bitwise_replay_ok"] = rep.bitwise_replay_ok;
  out["orth_residual_u"] = rep.orth_residual_u;
  out["orth_residual_v"] = rep.orth_residual_v;
  out["reflectors_u"] = rep.u.reflector_count();
  out["reflectors_v"] = rep.v.reflector_count();
  out["violations"] = rep.violations;
  if (!o.out.empty()) write_json_atomic(o.out, out);
  std::printf("%s\n", out.dump(2).c_str());
  return rep.violations.empty() && rep.bound_holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saddlelab: worst-case saddle-point instances, reference "
               "solvers, rate certificates, and the rotation adversary"};
  app.require_subcommand(1);

  CommonOpts o;
  double gap0 = 1.0, rx = 0.0, ry = 0.0;
  bool as_json = false;
  std::vector<std::string> solvers;
  std::string suite = "all";
  std::string alg = "cp";
  int k = 5;

  CLI::App* bounds = app.add_subcommand(
      "bounds", "rate certificate and the iteration lower bound");
  add_common(bounds, o);
  bounds->add_option("--gap0", gap0, "initial-scale constant for k(eps)");
  bounds->add_option("--rx", rx, "solution radius for the cc reduction");
  bounds->add_option("--ry", ry, "solution radius for the cc reduction");
  bounds->add_flag("--json", as_json, "emit JSON");

  CLI::App* solve = app.add_subcommand(
      "solve", "run solvers with span instrumentation; traces + report");
  add_common(solve, o);
  solve
      ->add_option("--solvers", solvers,
                   "comma-separated: gda,eg,ade,cp,double-loop")
      ->delimiter(',');

  CLI::App* verify =
      app.add_subcommand("verify", "run the constructive property suites");
  add_common(verify, o);
  verify
      ->add_option("--suite", suite,
                   "all | zero-chain | solutions | bounds | rotation")
      ->check(CLI::IsMember(
          {"all", "zero-chain", "solutions", "bounds", "rotation"}));

  CLI::App* adversary = app.add_subcommand(
      "adversary", "sequential rotation game against a registered algorithm");
  add_common(adversary, o);
  adversary->add_option("--alg", alg, "cp | eg | toy-nonspan");
  adversary->add_option("--k", k, "game rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bounds->parsed()) {
      apply_spec_file(bounds, o);
      return cmd_bounds(o, gap0, rx, ry, as_json);
    }
    if (solve->parsed()) {
      apply_spec_file(solve, o);
      return cmd_solve(o, solvers);
    }
    if (verify->parsed()) {
      apply_spec_file(verify, o);
      return cmd_verify(suite, o);
    }
    if (adversary->parsed()) {
      apply_spec_file(adversary, o);
      return cmd_adversary(o, alg, k);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
