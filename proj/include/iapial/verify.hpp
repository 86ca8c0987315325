#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iapial/constants.hpp"
#include "iapial/problem.hpp"
#include "iapial/s_iapial.hpp"

namespace iapial {

enum class DomainKind { Box, Ball, Simplex, L1Box };

std::string to_string(DomainKind k);
DomainKind parse_domain_kind(const std::string& s);

struct GeneratorSpec {
  int n = 50;
  int l = 10;
  double m_f = 1.0;
  double L_f = 4.0;
  DomainKind kind = DomainKind::Box;
  double radius = 1.0;    // box half-width, ball radius or simplex cap
  double center = 0.0;    // box/ball center, same value in every coordinate
  double l1_scale = 0.0;  // l1_box only
  double sv_min = 0.5;    // singular values of A span [sv_min, sv_max]
  double sv_max = 2.0;
  double q_scale = 1.0;   // ||q|| is about q_scale
  double slater_jitter = 0.5;  // fraction of the inradius z_bar may move off the center
  bool certify_phi_lower = true;
  std::uint64_t seed = 0;

  // Throws ArgumentError for inconsistent specs (l > n, m_f > L_f, ...).
  void check() const;
};

ProblemInstance generate(const GeneratorSpec& spec);

// Max over points and coordinates of |fd_i - g_i| / max(|g_i|, 1e-3 ||g||_inf, 1e-12), central
// differences with step 1e-6 (1 + ||z||) rounded down to a power of two unless given.
double finite_diff_grad_check(const std::function<double(const Vector&)>& value,
                              const std::function<Vector(const Vector&)>& gradient, const std::vector<Vector>& points,
                              std::optional<double> step = std::nullopt);

struct SubgradientCheck {
  bool passed = true;
  double worst_margin = 0.0;  // max of (h(z) + <u, z' - z> - eps) - h(z'); positive breaks the inequality
  Vector worst_point;
  std::uint64_t seed = 0;
  int samples = 0;
};

// psi(z') >= psi(z) + <u, z' - z> - eps over sampled z' of `set`; tolerance 1e-9 scale.
SubgradientCheck sampled_subgradient_check(const std::function<double(const Vector&)>& psi, const DomainSet& set,
                                           const Vector& z, const Vector& u, double eps, int uniform_samples = 200,
                                           int boundary_samples = 50, std::uint64_t seed = 0);

SubgradientCheck eps_subdiff_check(const Regularizer& h, const Vector& z, const Vector& u, double eps,
                                   int uniform_samples = 200, int boundary_samples = 50, std::uint64_t seed = 0);

// ||z_hat - prox(h, t, z_hat - t (grad f(z_hat) + A^T p_hat - w_hat))||; t defaults to 1/L_f.
double inclusion_residual(const Vector& z_hat, const Vector& w_hat, const Vector& p_hat,
                          const ProblemInstance& problem, std::optional<double> t = std::nullopt);

enum class MonitorStatus { Pass, Fail, Skipped };

std::string to_string(MonitorStatus s);

struct MonitorEntry {
  std::string inequality_id;
  std::string paper_ref;  // the inequality as a formula
  MonitorStatus status = MonitorStatus::Pass;
  double worst_slack = 0.0;  // min of rhs - lhs over checked iterations
  int at_cycle = 0;          // cycle and iteration of the worst slack
  int at_iteration = 0;
  int checked = 0;
};

struct MonitorReport {
  std::vector<MonitorEntry> entries;

  bool passed() const;  // true iff no entry failed
  const MonitorEntry* find(const std::string& id) const;
  std::vector<std::string> failing_ids() const;
};

// Re-checks the per-iteration inequalities of every cycle in `cycles`. Each check uses the additive
// tolerance 1e-8 (1 + |rhs|), widened by the magnitude of the Lagrangian values where they enter.
MonitorReport monitor(const std::vector<CycleHistory>& cycles, const TheoreticalConstants& constants,
                      const TolerancePair& tol);

}  // namespace iapial
