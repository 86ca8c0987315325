#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "iapial/driver.hpp"
#include "iapial/errors.hpp"
#include "iapial/io.hpp"
#include "iapial/verify.hpp"

namespace {

using namespace iapial;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kInputError = 2, kCycleCap = 3, kInternalError = 4 };

struct SolverFlags {
  double rho = 1e-3;
  double eta = 1e-3;
  double nu = 1.0;
  double sigma = 0.70710678;
  double c1 = 1.0;
  std::string restart = "warm";
  std::uint64_t seed = 0;
  int max_cycles = 64;
  int max_outer = 0;

  void add_to(CLI::App* app, bool driver_flags) {
    app->add_option("--rho", rho, "stationarity tolerance rho_hat")->capture_default_str();
    app->add_option("--eta", eta, "feasibility tolerance eta_hat")->capture_default_str();
    app->add_option("--nu", nu, "ACG tolerance scale nu")->capture_default_str();
    app->add_option("--sigma", sigma, "relative error parameter, at most 1/sqrt(2)")->capture_default_str();
    app->add_option("--c1", c1, "initial penalty parameter")->capture_default_str();
    app->add_option("--seed", seed, "seed for assumption sampling")->capture_default_str();
    app->add_option("--max-outer", max_outer, "outer iteration cap per cycle (0: automatic)");
    if (driver_flags) {
      app->add_option("--restart", restart, "restart mode after a failed cycle")
          ->check(CLI::IsMember({"cold", "warm"}))
          ->capture_default_str();
      app->add_option("--max-cycles", max_cycles, "global cycle cap")->capture_default_str();
    }
  }

  TolerancePair tol() const {
    TolerancePair t{rho, eta};
    t.check();
    return t;
  }

  DriverConfig driver() const {
    DriverConfig cfg;
    cfg.c1 = c1;
    cfg.restart = parse_restart_mode(restart);
    cfg.nu = nu;
    cfg.sigma = sigma;
    cfg.tol = tol();
    cfg.max_cycles = max_cycles;
    if (max_outer > 0) cfg.max_outer = max_outer;
    return cfg;
  }
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void require_distinct(const std::string& in, const std::string& out) {
  if (!in.empty() && in == out) throw ArgumentError(fmt::format("input and output paths coincide: '{}'", in));
}

ProblemInstance load_problem(const std::string& path) { return problem_from_json(parse_json(read_text_file(path))); }

void check_assumptions(const ProblemInstance& problem, std::uint64_t seed) {
  const ValidationReport report = validate(problem, 200, seed);
  if (report.all_passed()) return;
  std::string failed;
  for (const auto& c : report.checks) {
    if (!c.passed) failed += fmt::format("\n  {}: worst {:.3e} {}", c.name, c.worst, c.detail);
  }
  throw AssumptionError("problem failed assumption checks:" + failed);
}

int cmd_generate(const std::string& spec_path, const std::string& out_path, const std::optional<std::uint64_t>& seed) {
  require_distinct(spec_path, out_path);
  GeneratorSpec spec = generator_spec_from_json(parse_json(read_text_file(spec_path)));
  if (seed) spec.seed = *seed;
  const ProblemInstance problem = generate(spec);
  check_assumptions(problem, spec.seed);
  write_text_file(out_path, problem_to_json(problem).dump() + "\n");
  const auto& hc = problem.composite();
  fmt::print("n = {}, l = {}, h = {}\n", problem.n(), problem.l(), kind_name(hc.h));
  fmt::print("m_f = {}\nL_f = {}\n", format_double(problem.smooth().m_f), format_double(problem.smooth().L_f));
  fmt::print("||A|| = {}\nsigma_plus = {}\n", format_double(problem.constraint().op_norm),
             format_double(problem.constraint().sigma_plus));
  fmt::print("D = {}\ndbar = {}\nL_h = {}\n", format_double(hc.diameter()), format_double(hc.slater_distance()),
             format_double(hc.L_h));
  if (problem.phi_lower()) fmt::print("phi_lower = {}\n", format_double(*problem.phi_lower()));
  return kOk;
}

int cmd_solve(const std::string& problem_path, const std::string& summary_path, const std::string& trace_path,
              const std::string& timestamp, const SolverFlags& flags) {
  require_distinct(problem_path, summary_path);
  require_distinct(problem_path, trace_path);
  const ProblemInstance problem = load_problem(problem_path);
  check_assumptions(problem, flags.seed);
  const DriverConfig cfg = flags.driver();
  const SolveResult result = solve(problem, cfg);
  if (!summary_path.empty()) {
    const Json summary = summary_to_json(problem, cfg, result, timestamp.empty() ? utc_timestamp() : timestamp);
    write_text_file(summary_path, summary.dump(2) + "\n");
  }
  if (!trace_path.empty()) write_text_file(trace_path, trace_csv(result));

  for (std::size_t i = 0; i < result.cycles.size(); ++i) {
    const auto& out = result.cycles[i];
    fmt::print("cycle {} c = {:.6g}: {} after {} outer / {} ACG iterations\n", i + 1, out.history.c,
               to_string(out.status), out.history.records.size(), out.total_acg_iterations());
  }
  fmt::print("status: {}\n", to_string(result.status));
  if (result.triple) {
    const auto& t = *result.triple;
    fmt::print("||w_hat|| = {:.6e}, ||A z_hat - b|| = {:.6e}, inclusion residual = {:.3e}\n", t.w_hat.norm(),
               problem.constraint().residual(t.z_hat).norm(), inclusion_residual(t.z_hat, t.w_hat, t.p_hat, problem));
    return kOk;
  }
  std::cerr << "no stationary triple: " << to_string(result.status) << "\n";
  return kCycleCap;
}

int cmd_verify(const std::string& problem_path, const std::string& run_path, const std::string& report_path,
               const SolverFlags& flags) {
  require_distinct(run_path, report_path);
  const ProblemInstance problem = load_problem(problem_path);
  const std::string text = read_text_file(run_path);
  LoadedRun run;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    run = run_from_summary(problem, parse_json(text));
  } else {
    run.nu = flags.nu;
    run.sigma = flags.sigma;
    run.tol = flags.tol();
    run.c1 = flags.c1;
    run.cycles = cycles_from_trace_csv(problem, text, flags.nu, flags.sigma);
  }
  const TheoreticalConstants k = theoretical_constants(problem, run.nu, run.sigma, run.tol, run.c1);
  const MonitorReport report = monitor(run.cycles, k, run.tol);
  if (!report_path.empty()) write_text_file(report_path, monitor_to_json(report).dump(2) + "\n");
  for (const auto& e : report.entries) {
    fmt::print("{:<26} {:<7} worst slack {:.3e} (cycle {}, k = {}, {} checks)\n", e.inequality_id, to_string(e.status),
               e.worst_slack, e.at_cycle, e.at_iteration, e.checked);
  }
  if (report.passed()) return kOk;
  std::string ids;
  for (const auto& id : report.failing_ids()) ids += (ids.empty() ? "" : ", ") + id;
  std::cerr << "violated: " << ids << "\n";
  return kVerifyFailed;
}

int cmd_constants(const std::string& problem_path, const SolverFlags& flags) {
  const ProblemInstance problem = load_problem(problem_path);
  const TheoreticalConstants k = theoretical_constants(problem, flags.nu, flags.sigma, flags.tol(), flags.c1);
  Json doc = constants_to_json(k);
  doc["cycle_bound"] = cycle_count_bound(k.c_bar, flags.c1);
  const PenaltyParams p = PenaltyParams::make(problem, flags.c1, flags.nu, flags.sigma);
  doc["inner_bound_at_c1"] = inner_iteration_bound(p);
  const auto outer = outer_iteration_bound(k, flags.nu, flags.sigma, flags.rho, flags.c1);
  doc["outer_bound_at_c1"] = outer ? Json(*outer) : Json(nullptr);
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ArgumentError(fmt::format("bad grid value '{}'", cell));
    }
  }
  if (grid.empty()) throw ArgumentError("empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ArgumentError("grid must be positive and strictly ascending");
    }
  }
  return grid;
}

int cmd_sweep(const std::string& problem_path, const std::string& grid_text, const std::string& units,
              const std::string& out_path, const SolverFlags& flags) {
  require_distinct(problem_path, out_path);
  const ProblemInstance problem = load_problem(problem_path);
  const TolerancePair tol = flags.tol();
  const TheoreticalConstants k = theoretical_constants(problem, flags.nu, flags.sigma, tol, flags.c1);
  std::vector<double> grid = parse_grid(grid_text);
  if (units == "cbar") {
    for (double& g : grid) g *= k.c_bar;
  }
  std::string csv = "c,outcome,outer_iters,total_acg_iters,final_feasibility,final_w_hat,kappa2_over_c\n";
  const Vector z0 = default_start(problem);
  for (double c : grid) {
    CycleConfig cfg;
    cfg.nu = flags.nu;
    cfg.sigma = flags.sigma;
    cfg.c = c;
    cfg.tol = tol;
    if (flags.max_outer > 0) cfg.max_outer = flags.max_outer;
    const CycleOutcome out = run_cycle(problem, cfg, z0);
    const auto& last = out.history.records.back();
    csv += fmt::format("{},{},{},{},{},{},{}\n", format_double(c), to_string(out.status), out.history.records.size(),
                       out.total_acg_iterations(), format_double(last.feas_hat), format_double(last.norm_w_hat),
                       format_double(k.kappa2 / c));
  }
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out_path, csv);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact proximal augmented Lagrangian solver for linearly constrained nonconvex composite problems"};
  app.require_subcommand(1);

  std::string spec_path, out_path, problem_path, summary_path, trace_path, run_path, report_path, grid, timestamp;
  std::string units = "absolute";
  std::optional<std::uint64_t> gen_seed;
  SolverFlags flags;

  auto* gen = app.add_subcommand("generate", "build a synthetic problem file from a generator spec");
  gen->add_option("spec", spec_path, "generator spec (JSON)")->required();
  gen->add_option("-o,--output", out_path, "problem file to write")->required();
  gen->add_option("--seed", gen_seed, "override the spec seed");

  auto* sol = app.add_subcommand("solve", "run the penalty-doubling solver");
  sol->add_option("problem", problem_path, "problem file (JSON)")->required();
  sol->add_option("--summary", summary_path, "run summary to write (JSON)");
  sol->add_option("--trace", trace_path, "per-iteration trace to write (CSV)");
  sol->add_option("--timestamp", timestamp, "fixed timestamp for the summary");
  flags.add_to(sol, true);

  auto* ver = app.add_subcommand("verify", "re-check the per-iteration inequalities of a run");
  ver->add_option("problem", problem_path, "problem file (JSON)")->required();
  ver->add_option("run", run_path, "run summary (JSON) or trace (CSV)")->required();
  ver->add_option("--report", report_path, "monitor report to write (JSON)");
  flags.add_to(ver, false);

  auto* con = app.add_subcommand("constants", "print the theoretical constants of a problem");
  con->add_option("problem", problem_path, "problem file (JSON)")->required();
  flags.add_to(con, false);

  auto* sw = app.add_subcommand("sweep", "run one cycle per penalty value");
  sw->add_option("problem", problem_path, "problem file (JSON)")->required();
  sw->add_option("--grid", grid, "comma-separated ascending penalty values")->required();
  sw->add_option("--units", units, "grid units")->check(CLI::IsMember({"absolute", "cbar"}))->capture_default_str();
  sw->add_option("-o,--output", out_path, "CSV to write (stdout when absent)");
  flags.add_to(sw, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*gen) return cmd_generate(spec_path, out_path, gen_seed);
    if (*sol) return cmd_solve(problem_path, summary_path, trace_path, timestamp, flags);
    if (*ver) return cmd_verify(problem_path, run_path, report_path, flags);
    if (*con) return cmd_constants(problem_path, flags);
    if (*sw) return cmd_sweep(problem_path, grid, units, out_path, flags);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const AssumptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInputError;
}
