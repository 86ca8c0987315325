#include "iapial/driver.hpp"

#include <fmt/core.h>

#include "iapial/errors.hpp"

namespace iapial {

std::string to_string(RestartMode m) { return m == RestartMode::Cold ? "cold" : "warm"; }

RestartMode parse_restart_mode(const std::string& s) {
  if (s == "cold") return RestartMode::Cold;
  if (s == "warm" || s == "hybrid_warm") return RestartMode::HybridWarm;
  throw ArgumentError(fmt::format("unknown restart mode '{}'", s));
}

void DriverConfig::check() const {
  if (!(c1 > 0.0)) throw ArgumentError("c1 must be positive");
  if (max_cycles <= 0) throw ArgumentError("max_cycles must be positive");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Success:
      return "success";
    case SolveStatus::CycleCap:
      return "cycle_cap";
    case SolveStatus::BudgetExceeded:
      return "budget_exceeded";
  }
  return "unknown";
}

int SolveResult::total_acg_iterations() const {
  int total = 0;
  for (const auto& c : cycles) total += c.total_acg_iterations();
  return total;
}

int SolveResult::total_outer_iterations() const {
  int total = 0;
  for (const auto& c : cycles) total += static_cast<int>(c.history.records.size());
  return total;
}

Vector default_start(const ProblemInstance& problem) {
  return problem.composite().project(Vector::Zero(problem.n()));
}

SolveResult solve(const ProblemInstance& problem, const DriverConfig& config, const Vector& z0) {
  config.check();
  if (!problem.composite().contains(z0)) throw ArgumentError("z0 must lie in the domain");

  SolveResult result;
  result.constants = theoretical_constants(problem, config.nu, config.sigma, config.tol, config.c1);
  result.cycle_bound = cycle_count_bound(result.constants.c_bar, config.c1);

  CycleConfig cycle;
  cycle.nu = config.nu;
  cycle.sigma = config.sigma;
  cycle.tol = config.tol;
  cycle.max_outer = config.max_outer;

  Vector start = z0;
  double c = config.c1;
  for (int ell = 1; ell <= config.max_cycles; ++ell) {
    cycle.c = c;
    if (config.acg_trace) {
      cycle.acg_trace = [&config, ell](int k, const AcgTraceRecord& rec) { config.acg_trace(ell, k, rec); };
    }
    result.cycles.push_back(run_cycle(problem, cycle, start));
    const CycleOutcome& out = result.cycles.back();
    if (out.status == CycleStatus::Success) {
      result.status = SolveStatus::Success;
      result.triple = out.triple;
      return result;
    }
    if (out.status == CycleStatus::BudgetExceeded) {
      result.status = SolveStatus::BudgetExceeded;
      return result;
    }
    if (config.restart == RestartMode::HybridWarm) start = out.last_z;
    c *= 2.0;
  }
  result.status = SolveStatus::CycleCap;
  return result;
}

SolveResult solve(const ProblemInstance& problem, const DriverConfig& config) {
  return solve(problem, config, default_start(problem));
}

}  // namespace iapial
