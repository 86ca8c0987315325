#include "iapial/constants.hpp"

#include <cmath>

#include "iapial/errors.hpp"

namespace iapial {

TheoreticalConstants compute_constants(const ConstantInputs& in) {
  if (!(in.sigma > 0.0) || in.sigma >= 1.0) throw ArgumentError("constants require sigma in (0, 1)");
  if (!(in.nu > 0.0)) throw ArgumentError("constants require nu > 0");
  if (!(in.m_f > 0.0) || !(in.sigma_plus > 0.0) || !(in.dbar > 0.0) || !(in.op_norm > 0.0)) {
    throw ArgumentError("constants require m_f, sigma_plus, dbar and ||A|| positive");
  }
  if (!(in.rho_hat > 0.0) || !(in.eta_hat > 0.0) || !(in.c1 > 0.0)) {
    throw ArgumentError("constants require positive tolerances and c1");
  }
  TheoreticalConstants k;
  const double s = in.sigma;
  const double nu = in.nu;
  k.lambda = 1.0 / (2.0 * in.m_f);
  k.D = in.D;
  k.dbar = in.dbar;
  k.grad_bound = in.grad_bound;
  k.phi_lower = in.phi_lower;
  k.phi_upper = in.phi_upper;

  const double D2_lam = in.D * in.D / k.lambda;
  k.kappa0 = (2.0 * (in.L_h + in.grad_bound) * in.D +
              (2.0 * (1.0 + nu) / (1.0 - s) + s * s / (2.0 * (1.0 - s) * (1.0 - s))) * D2_lam) /
             in.sigma_plus;
  const double one2nu = (1.0 + 2.0 * nu) * (1.0 + 2.0 * nu);
  k.kappa1 = 32.0 * one2nu * k.kappa0 * k.kappa0 / (k.lambda * (1.0 - s * s) * in.dbar * in.dbar);
  k.kappa2 = 2.0 * k.kappa0 / in.dbar + nu * in.D / (k.lambda * in.op_norm * (1.0 - s));
  k.c_bar = std::max(k.kappa1 / (in.rho_hat * in.rho_hat), k.kappa2 / in.eta_hat);
  k.C1 = 2.0 * one2nu / (1.0 - s * s);
  if (in.phi_lower && in.phi_upper) k.R_star = *in.phi_upper - *in.phi_lower + D2_lam;
  k.T1 = std::max({in.c1, in.m_f * k.kappa0 * k.kappa0 / (in.dbar * in.dbar * in.rho_hat * in.rho_hat),
                   k.kappa0 / (in.dbar * in.eta_hat)});
  k.T2 = (in.L_f + k.T1 * in.op_norm * in.op_norm) / in.m_f;
  return k;
}

TheoreticalConstants theoretical_constants(const ProblemInstance& problem, double nu, double sigma,
                                           const TolerancePair& tol, double c1) {
  ConstantInputs in;
  const auto& hc = problem.composite();
  in.L_h = hc.L_h;
  in.grad_bound = problem.grad_bound();
  in.D = hc.diameter();
  in.dbar = hc.slater_distance();
  in.sigma_plus = problem.constraint().sigma_plus;
  in.op_norm = problem.constraint().op_norm;
  in.m_f = problem.smooth().m_f;
  in.L_f = problem.smooth().L_f;
  in.nu = nu;
  in.sigma = sigma;
  in.rho_hat = tol.rho_hat;
  in.eta_hat = tol.eta_hat;
  in.c1 = c1;
  in.phi_lower = problem.phi_lower();
  in.phi_upper = problem.phi(hc.slater_point);
  return compute_constants(in);
}

std::optional<double> outer_iteration_bound(const TheoreticalConstants& k, double nu, double sigma, double rho_hat,
                                            double c) {
  if (!k.R_star) return std::nullopt;
  const double one2nu = (1.0 + 2.0 * nu) * (1.0 + 2.0 * nu);
  const double factor = 4.0 * one2nu / ((1.0 - sigma * sigma) * k.lambda * rho_hat * rho_hat);
  return std::ceil(1.0 + factor * (3.0 * *k.R_star + k.kappa0 * k.kappa0 / (2.0 * k.dbar * k.dbar * c)));
}

int cycle_count_bound(double c_bar, double c1) {
  return static_cast<int>(std::ceil(std::log2(std::max(1.0, 2.0 * c_bar / c1)))) + 1;
}

}  // namespace iapial
