#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iapial/constants.hpp"
#include "iapial/s_iapial.hpp"

namespace iapial {

enum class RestartMode { Cold, HybridWarm };

std::string to_string(RestartMode m);
RestartMode parse_restart_mode(const std::string& s);  // "cold" or "warm"

struct DriverConfig {
  double c1 = 1.0;
  RestartMode restart = RestartMode::HybridWarm;
  double nu = 1.0;
  double sigma = 0.70710678118654752;
  TolerancePair tol;
  int max_cycles = 64;
  std::optional<int> max_outer;  // per cycle
  // (cycle index starting at 1, outer k, ACG record)
  std::function<void(int, int, const AcgTraceRecord&)> acg_trace;

  void check() const;
};

enum class SolveStatus { Success, CycleCap, BudgetExceeded };

std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::CycleCap;
  std::optional<StationaryTriple> triple;
  std::vector<CycleOutcome> cycles;
  TheoreticalConstants constants;
  int cycle_bound = 0;

  int total_acg_iterations() const;
  int total_outer_iterations() const;
};

// Projection of the origin onto H.
Vector default_start(const ProblemInstance& problem);

// Penalty doubling: c_l = c1 2^(l-1) until a cycle succeeds or the cap is hit.
SolveResult solve(const ProblemInstance& problem, const DriverConfig& config, const Vector& z0);
SolveResult solve(const ProblemInstance& problem, const DriverConfig& config);

}  // namespace iapial
