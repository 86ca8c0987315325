#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iapial/acg.hpp"
#include "iapial/aug_lagrangian.hpp"
#include "iapial/problem.hpp"

namespace iapial {

struct CycleConfig {
  double nu = 1.0;
  double sigma = 0.70710678118654752;  // 1/sqrt(2)
  double c = 1.0;
  TolerancePair tol;
  // Outer iteration cap; defaults to twice the outer bound when it is computable, else 1e5.
  // Running past a computable bound throws BoundViolation instead of returning BudgetExceeded.
  std::optional<int> max_outer;
  // Optional per-iteration ACG trace, tagged with the outer index k.
  std::function<void(int k, const AcgTraceRecord&)> acg_trace;

  void check() const;
};

// One outer iteration, with everything needed to re-check the cycle's inequalities offline.
struct OuterRecord {
  int k = 0;
  int inner_iters = 0;
  int inner_bound = 0;        // ceil(1 + sqrt(T_c) log_1^+(2 T_c / min{nu, sigma}))
  double norm_r = 0.0;        // ||r_k||
  double eps = 0.0;           // eps_k
  double norm_v = 0.0;        // ||v_k||
  double norm_w = 0.0;        // ||w_k||
  double delta = 0.0;         // delta_k = eps_k / lambda
  double norm_w_hat = 0.0;    // ||w_hat_k||
  double feas_hat = 0.0;      // ||A z_hat_k - b||
  double feas = 0.0;          // ||A z_k - b||
  double zhat_shift = 0.0;    // ||z_hat_k - z_k||
  double norm_p = 0.0;        // ||p_k||, p_k = p_{k-1} + c (A z_k - b)
  double norm_dp = 0.0;       // ||p_k - p_{k-1}||
  double lagrangian_prev = 0.0;  // L_c(z_{k-1}, p_{k-1})
  double lagrangian = 0.0;       // L_c(z_k, p_k)
  double delta_k = 0.0;          // NaN for k = 1
};

struct CycleHistory {
  double c = 0.0;
  PenaltyParams params;
  std::vector<OuterRecord> records;

  // Index of the record with the smallest ||w_hat||; -1 when empty.
  int best_index() const;
};

enum class CycleStatus { Success, SmallPenalty, BudgetExceeded };

std::string to_string(CycleStatus s);

struct StationaryTriple {
  Vector z_hat;
  Vector w_hat;
  Vector p_hat;
};

struct CycleOutcome {
  CycleStatus status = CycleStatus::BudgetExceeded;
  std::optional<StationaryTriple> triple;  // set for Success and SmallPenalty
  Vector last_z;                           // z_k of the final outer iteration
  CycleHistory history;

  int total_acg_iterations() const;
};

// lambda (1 - sigma^2) rho_hat^2 / (4 (1 + 2 nu)^2).
double small_penalty_threshold(double lambda, double sigma, double rho_hat, double nu);

// Delta_k = (L_c(z_1, p_1) - L_c(z_k, p_k)) / (k - 1); requires k >= 2.
double delta_k(double lagrangian_first, double lagrangian_k, int k);

// Returns false for k < 2 (the test does not apply).
bool small_penalty_test(double lagrangian_first, double lagrangian_k, int k, const CycleConfig& config,
                        double lambda);

// p_prev + c (A z_k - b).
Vector multiplier_update(const ProblemInstance& problem, const Vector& p_prev, const Vector& z_k, double c);

// Inner-iteration bound for a given penalty.
int inner_iteration_bound(const PenaltyParams& params);

// One penalty cycle started at (z_0, p_0 = 0).
CycleOutcome run_cycle(const ProblemInstance& problem, const CycleConfig& config, const Vector& z0);

}  // namespace iapial
