#include "iapial/s_iapial.hpp"

#include <cmath>
#include <limits>

#include "iapial/constants.hpp"
#include "iapial/errors.hpp"

#include <fmt/core.h>

namespace iapial {
namespace {

constexpr int kDefaultMaxOuter = 100000;
constexpr double kMaxOuterCeiling = 1e9;

std::optional<double> outer_bound(const ProblemInstance& problem, const CycleConfig& config) {
  if (!problem.phi_lower()) return std::nullopt;
  const TheoreticalConstants k = theoretical_constants(problem, config.nu, config.sigma, config.tol, config.c);
  return outer_iteration_bound(k, config.nu, config.sigma, config.tol.rho_hat, config.c);
}

}  // namespace

void CycleConfig::check() const {
  if (!(nu > 0.0)) throw ArgumentError("nu must be positive");
  if (!(sigma > 0.0) || sigma > 1.0 / std::sqrt(2.0) + 1e-15) throw ArgumentError("sigma must lie in (0, 1/sqrt(2)]");
  if (!(c > 0.0)) throw ArgumentError("penalty parameter c must be positive");
  tol.check();
  if (max_outer && *max_outer <= 0) throw ArgumentError("max_outer must be positive");
}

int CycleHistory::best_index() const {
  int best = -1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (best < 0 || records[i].norm_w_hat < records[best].norm_w_hat) best = static_cast<int>(i);
  }
  return best;
}

std::string to_string(CycleStatus s) {
  switch (s) {
    case CycleStatus::Success:
      return "success";
    case CycleStatus::SmallPenalty:
      return "small_penalty";
    case CycleStatus::BudgetExceeded:
      return "budget_exceeded";
  }
  return "unknown";
}

int CycleOutcome::total_acg_iterations() const {
  int total = 0;
  for (const auto& r : history.records) total += r.inner_iters;
  return total;
}

double small_penalty_threshold(double lambda, double sigma, double rho_hat, double nu) {
  return lambda * (1.0 - sigma * sigma) * rho_hat * rho_hat / (4.0 * (1.0 + 2.0 * nu) * (1.0 + 2.0 * nu));
}

double delta_k(double lagrangian_first, double lagrangian_k, int k) {
  if (k < 2) throw ArgumentError("Delta_k is defined for k >= 2");
  return (lagrangian_first - lagrangian_k) / static_cast<double>(k - 1);
}

bool small_penalty_test(double lagrangian_first, double lagrangian_k, int k, const CycleConfig& config,
                        double lambda) {
  if (k < 2) return false;
  return delta_k(lagrangian_first, lagrangian_k, k) <=
         small_penalty_threshold(lambda, config.sigma, config.tol.rho_hat, config.nu);
}

Vector multiplier_update(const ProblemInstance& problem, const Vector& p_prev, const Vector& z_k, double c) {
  return p_prev + c * problem.constraint().residual(z_k);
}

int inner_iteration_bound(const PenaltyParams& params) {
  const double T_c = 2.0 * params.lambda * params.L_c + 1.0;
  return saturating_int(std::ceil(1.0 + std::sqrt(T_c) * log1_plus(2.0 * T_c / std::min(params.nu, params.sigma))));
}

CycleOutcome run_cycle(const ProblemInstance& problem, const CycleConfig& config, const Vector& z0) {
  config.check();
  if (z0.size() != problem.n()) throw StructuralError("initial point has the wrong dimension");
  if (!problem.composite().contains(z0)) throw ArgumentError("initial point must lie in the domain");

  const PenaltyParams params = PenaltyParams::make(problem, config.c, config.nu, config.sigma);
  const std::optional<double> bound = outer_bound(problem, config);
  const int max_outer = config.max_outer.value_or(
      bound ? static_cast<int>(std::min(2.0 * *bound, kMaxOuterCeiling)) : kDefaultMaxOuter);
  const int inner_bound = inner_iteration_bound(params);
  const int acg_cap = saturating_int(10.0 * acg_iteration_bound(params.M_s, params.mu, params.sigma_c));

  CycleOutcome out;
  out.history.c = config.c;
  out.history.params = params;

  Vector z_prev = z0;
  Vector p_prev = Vector::Zero(problem.l());
  double lagr_prev = lagrangian_value(problem, z_prev, p_prev, config.c);
  double lagr_first = 0.0;

  for (int k = 1; k <= max_outer; ++k) {
    const CompositeStructure cs = build_subproblem(problem, z_prev, p_prev, params);
    AcgTraceHook hook;
    if (config.acg_trace) hook = [&](const AcgTraceRecord& rec) { config.acg_trace(k, rec); };
    const AcgCertificate cert = acg_run(cs, z_prev, params.sigma_c, acg_cap, hook);
    const RefinedIterate ref = refine(problem, z_prev, p_prev, cert.x, cert.u, cert.eta, params);
    // Candidate multiplier; committed only if the cycle continues.
    const Vector& p_k = ref.p;
    const double lagr_k = lagrangian_value(problem, cert.x, p_k, config.c);
    if (k == 1) lagr_first = lagr_k;

    OuterRecord rec;
    rec.k = k;
    rec.inner_iters = cert.iterations;
    rec.inner_bound = inner_bound;
    rec.norm_r = ref.r.norm();
    rec.eps = cert.eta;
    rec.norm_v = cert.u.norm();
    rec.norm_w = ref.w.norm();
    rec.delta = ref.delta;
    rec.norm_w_hat = ref.w_hat.norm();
    rec.feas_hat = problem.constraint().residual(ref.z_hat).norm();
    rec.feas = problem.constraint().residual(cert.x).norm();
    rec.zhat_shift = (ref.z_hat - cert.x).norm();
    rec.norm_p = p_k.norm();
    rec.norm_dp = (p_k - p_prev).norm();
    rec.lagrangian_prev = lagr_prev;
    rec.lagrangian = lagr_k;
    rec.delta_k = k >= 2 ? delta_k(lagr_first, lagr_k, k) : std::numeric_limits<double>::quiet_NaN();
    out.history.records.push_back(rec);
    out.last_z = cert.x;

    if (stationarity_check(problem, ref.z_hat, ref.w_hat, config.tol)) {
      out.status = CycleStatus::Success;
      out.triple = StationaryTriple{ref.z_hat, ref.w_hat, ref.p_hat};
      return out;
    }
    if (small_penalty_test(lagr_first, lagr_k, k, config, params.lambda)) {
      out.status = CycleStatus::SmallPenalty;
      out.triple = StationaryTriple{ref.z_hat, ref.w_hat, ref.p_hat};
      return out;
    }
    z_prev = cert.x;
    p_prev = p_k;
    lagr_prev = lagr_k;
  }
  if (bound && max_outer > *bound) {
    throw BoundViolation(fmt::format("cycle with c = {:.6g} ran {} outer iterations, past the bound {:.0f}", config.c,
                                     max_outer, *bound));
  }
  out.status = CycleStatus::BudgetExceeded;
  return out;
}

}  // namespace iapial
