#include "iapial/acg.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "iapial/errors.hpp"

namespace iapial {

double CompositeStructure::bregman(const Vector& x, const Vector& y, const Vector& grad_y) const {
  if (smooth_bregman) return smooth_bregman(x, y);
  return smooth_value(x) - smooth_value(y) - grad_y.dot(x - y);
}

AcgState AcgState::initial(const Vector& x0) {
  AcgState s;
  s.x = x0;
  s.y = x0;
  s.y0 = x0;
  s.gamma.slope = Vector::Zero(x0.size());
  s.gamma.anchor = x0;
  s.u = Vector::Zero(x0.size());
  return s;
}

double a_j_lower_bound(int j, double M_s, double mu) {
  const double quad = 0.25 * static_cast<double>(j) * static_cast<double>(j);
  const double geo = std::pow(1.0 + std::sqrt(mu / (4.0 * M_s)), 2.0 * (j - 1));
  return std::max(quad, geo) / M_s;
}

int acg_iteration_bound(double M_s, double mu, double sigma_tilde) {
  if (!(mu > 0.0)) throw ArgumentError("iteration bound requires mu > 0");
  if (!(sigma_tilde > 0.0)) throw ArgumentError("iteration bound requires sigma_tilde > 0");
  const double arg = (1.0 + 1.0 / sigma_tilde) * std::sqrt(2.0 * M_s);
  return saturating_int(std::ceil(1.0 + std::sqrt(M_s / mu) * log1_plus(arg)));
}

AcgState acg_step(const AcgState& state, const CompositeStructure& cs) {
  const double M = cs.M_s;
  const double Aj = state.A;
  const double s = cs.mu * Aj + 1.0;
  const double A_next = Aj + (s + std::sqrt(s * s + 4.0 * M * s * Aj)) / (2.0 * M);
  const double w_old = Aj / A_next;
  const double w_new = (A_next - Aj) / A_next;

  AcgState next;
  next.j = state.j + 1;
  next.A = A_next;
  next.y0 = state.y0;

  const Vector x_tilde = w_old * state.x + w_new * state.y;
  const Vector g = cs.smooth_grad(x_tilde);
  next.gamma.slope = w_old * state.gamma.slope + w_new * g;

  // argmin_y { <slope, y> + psi_n(y) + ||y - y0||^2/(2A) } is a prox of psi_n with step A.
  next.y = cs.nonsmooth_prox(A_next, state.y0 - A_next * next.gamma.slope);
  next.x = w_old * state.x + w_new * next.y;

  next.gamma.anchor = next.x;
  const double lin_at_x = cs.smooth_value(x_tilde) + g.dot(next.x - x_tilde);
  next.gamma.value = w_old * state.gamma(next.x) + w_new * lin_at_x;
  // gap_j(x_{j+1}) = gap_j(x_j) + D(x_{j+1}, x~) - D(x_j, x~) + <g - slope_j, x_{j+1} - x_j>.
  const double d_new = cs.bregman(next.x, x_tilde, g);
  double carried = 0.0;
  if (state.j > 0) {
    carried = state.gap + d_new - cs.bregman(state.x, x_tilde, g) + (g - state.gamma.slope).dot(next.x - state.x);
  }
  next.gap = w_old * carried + w_new * d_new;

  const double bound = a_j_lower_bound(next.j, M, cs.mu);
  if (A_next < bound * (1.0 - 1e-9)) {
    throw InvariantViolation(fmt::format("ACG growth bound violated at j = {}: A = {:.17g} < {:.17g}", next.j,
                                         A_next, bound));
  }

  next.u = (next.y0 - next.y) / A_next;
  // eta = psi(x) - Gamma(y) - psi_n(y) - <u, x - y>, regrouped around x.
  const double psin_x = cs.nonsmooth_value(next.x);
  const double psin_y = cs.nonsmooth_value(next.y);
  const double pair = (next.gamma.slope - next.u).dot(next.x - next.y);
  next.eta_raw = next.gap + (psin_x - psin_y) + pair;
  const double scale = 1.0 + std::abs(next.gap) + std::abs(psin_x) + std::abs(psin_y) + std::abs(pair);
  if (next.eta_raw < -1e-12 * scale || !std::isfinite(next.eta_raw)) {
    throw InvariantViolation(fmt::format("ACG eta = {:.6e} is negative beyond roundoff (scale {:.3e})",
                                         next.eta_raw, scale));
  }
  // Values below the cancellation noise floor of the four terms are indistinguishable from zero.
  next.eta = next.eta_raw > 4.0 * std::numeric_limits<double>::epsilon() * scale ? next.eta_raw : 0.0;
  return next;
}

AcgCertificate acg_run(const CompositeStructure& cs, const Vector& x0, double sigma_tilde,
                       std::optional<int> max_iters, const AcgTraceHook& hook) {
  if (!(cs.mu > 0.0) || !(4.0 * cs.M_s >= cs.mu)) {
    throw ArgumentError("ACG stopping guarantee requires 4 M_s >= mu > 0");
  }
  if (!(sigma_tilde > 0.0)) throw ArgumentError("sigma_tilde must be positive");
  const int cap = max_iters.value_or(saturating_int(10.0 * acg_iteration_bound(cs.M_s, cs.mu, sigma_tilde)));

  AcgState state = AcgState::initial(x0);
  while (state.j < cap) {
    state = acg_step(state, cs);
    const double lhs = state.u.squaredNorm() + 2.0 * state.eta;
    const double rhs_base = (x0 - state.x + state.u).squaredNorm();
    if (hook) {
      hook({state.j, state.A, state.u.norm(), state.eta, rhs_base > 0.0 ? lhs / rhs_base : INFINITY});
    }
    if (lhs <= sigma_tilde * sigma_tilde * rhs_base) {
      return {state.x, state.u, state.eta, state.j};
    }
  }
  throw BoundViolation(fmt::format("ACG did not meet its stopping test within {} iterations (M_s = {:.6g}, mu = {:.6g})",
                                   cap, cs.M_s, cs.mu));
}

}  // namespace iapial
