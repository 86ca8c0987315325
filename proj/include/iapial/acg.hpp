#pragma once

#include <functional>
#include <optional>

#include "iapial/types.hpp"

namespace iapial {

// Composite structure (psi_s, psi_n) of psi = psi_s + psi_n: psi_s convex with M_s-Lipschitz
// gradient, psi_n closed and mu-strongly convex with a computable prox.
struct CompositeStructure {
  std::function<double(const Vector&)> smooth_value;
  std::function<Vector(const Vector&)> smooth_grad;
  std::function<double(const Vector&)> nonsmooth_value;
  // Optional (x, y) -> psi_s(x) - psi_s(y) - <grad psi_s(y), x - y>, evaluated without cancellation.
  std::function<double(const Vector&, const Vector&)> smooth_bregman;
  // (t, x) -> argmin_u { psi_n(u) + ||u - x||^2 / (2t) }
  std::function<Vector(double, const Vector&)> nonsmooth_prox;
  double M_s = 1.0;
  double mu = 0.0;

  double value(const Vector& x) const { return smooth_value(x) + nonsmooth_value(x); }
  // Falls back to value differences when smooth_bregman is unset.
  double bregman(const Vector& x, const Vector& y, const Vector& grad_y) const;
};

// Affine function z -> value + <slope, z - anchor>. Anchored at the latest x_j so that late
// evaluations do not cancel against the large early values of psi_s.
struct AffineMinorant {
  Vector slope;
  Vector anchor;
  double value = 0.0;

  double operator()(const Vector& z) const { return value + slope.dot(z - anchor); }
  double intercept() const { return value - slope.dot(anchor); }
};

struct AcgState {
  int j = 0;
  double A = 0.0;
  Vector x;
  Vector y;
  Vector y0;
  AffineMinorant gamma;
  double gap = 0.0;  // psi_s(x) - gamma(x), updated through Bregman distances
  // Certificate of the latest step (meaningful for j >= 1).
  Vector u;
  double eta = 0.0;      // clamped to [0, inf)
  double eta_raw = 0.0;  // before clamping

  static AcgState initial(const Vector& x0);
};

struct AcgCertificate {
  Vector x;
  Vector u;
  double eta = 0.0;
  int iterations = 0;
};

struct AcgTraceRecord {
  int j = 0;
  double A = 0.0;
  double norm_u = 0.0;
  double eta = 0.0;
  double stopping_ratio = 0.0;  // (||u||^2 + 2 eta) / ||x0 - x + u||^2
};

using AcgTraceHook = std::function<void(const AcgTraceRecord&)>;

// (1/M_s) max{ j^2/4, (1 + sqrt(mu/(4 M_s)))^(2(j-1)) }.
double a_j_lower_bound(int j, double M_s, double mu);

// ceil(1 + sqrt(M_s/mu) log_1^+((1 + 1/sigma_tilde) sqrt(2 M_s))). Requires mu > 0.
int acg_iteration_bound(double M_s, double mu, double sigma_tilde);

// One accelerated step. Throws InvariantViolation when A_{j+1} falls below the growth bound or
// eta is negative beyond roundoff.
AcgState acg_step(const AcgState& state, const CompositeStructure& cs);

// Runs until ||u||^2 + 2 eta <= sigma_tilde^2 ||x0 - x + u||^2. Requires 4 M_s >= mu > 0.
// max_iters defaults to ten times acg_iteration_bound; hitting it throws BoundViolation.
AcgCertificate acg_run(const CompositeStructure& cs, const Vector& x0, double sigma_tilde,
                       std::optional<int> max_iters = std::nullopt, const AcgTraceHook& hook = {});

}  // namespace iapial
