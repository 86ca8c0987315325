#pragma once

#include <optional>

#include "iapial/problem.hpp"

namespace iapial {

// Scalars the constants depend on; split out so the formulas can be checked by hand.
struct ConstantInputs {
  double L_h = 0.0;
  double grad_bound = 0.0;  // nabla_f
  double D = 1.0;           // domain diameter
  double dbar = 1.0;        // Slater point distance to the boundary
  double sigma_plus = 1.0;  // smallest positive singular value of A
  double op_norm = 1.0;     // ||A||
  double m_f = 1.0;
  double L_f = 1.0;
  double nu = 1.0;
  double sigma = 0.70710678118654752;
  double rho_hat = 1e-3;
  double eta_hat = 1e-3;
  double c1 = 1.0;
  std::optional<double> phi_lower;  // certified lower bound on inf phi
  std::optional<double> phi_upper;  // phi at a feasible point, upper-bounds the optimal value
};

struct TheoreticalConstants {
  double lambda = 0.0;
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double c_bar = 0.0;
  std::optional<double> R_star;  // phi_upper - phi_lower + D^2/lambda
  double T1 = 0.0;
  double T2 = 0.0;
  double C1 = 0.0;
  double dbar = 0.0;
  double grad_bound = 0.0;
  double D = 0.0;
  std::optional<double> phi_lower;
  std::optional<double> phi_upper;

  // kappa0 / dbar, the multiplier bound.
  double multiplier_bound() const { return kappa0 / dbar; }
};

// Throws ArgumentError when sigma >= 1 or an input is nonpositive where it must be positive.
TheoreticalConstants compute_constants(const ConstantInputs& in);

// Pulls the geometric inputs from the instance; phi_upper is phi at the Slater point.
TheoreticalConstants theoretical_constants(const ProblemInstance& problem, double nu, double sigma,
                                           const TolerancePair& tol, double c1 = 1.0);

// ceil(1 + 4(1+2nu)^2/((1-sigma^2) lambda rho_hat^2) (3 R* + kappa0^2/(2 dbar^2 c))); unset without R*.
std::optional<double> outer_iteration_bound(const TheoreticalConstants& k, double nu, double sigma, double rho_hat,
                                            double c);

// ceil(log2(max{1, 2 c_bar / c1})) + 1.
int cycle_count_bound(double c_bar, double c1);

}  // namespace iapial
