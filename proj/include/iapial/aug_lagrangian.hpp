#pragma once

#include "iapial/acg.hpp"
#include "iapial/problem.hpp"

namespace iapial {

// Per-cycle parameters derived from the penalty c and the cycle scalars (nu, sigma).
struct PenaltyParams {
  double c = 1.0;
  double lambda = 0.5;   // 1/(2 m_f)
  double L_c = 1.0;      // L_f + c ||A||^2
  double sigma_c = 0.5;  // min{nu / sqrt(lambda L_c + 1), sigma}
  double M_s = 1.0;      // lambda L_c + 1/2
  double mu = 0.5;
  double nu = 1.0;
  double sigma = 0.7071067811865476;

  static PenaltyParams make(const ProblemInstance& problem, double c, double nu, double sigma);
};

struct RefinedIterate {
  Vector z_hat;
  Vector w_hat;
  Vector p_hat;
  Vector w;
  double delta = 0.0;
  Vector r;
  Vector p;  // p_prev + c (A z_k - b)
};

// f(z) + h(z) + <p, Az - b> + (c/2)||Az - b||^2. Throws ArgumentError when z is outside H.
double lagrangian_value(const ProblemInstance& problem, const Vector& z, const Vector& p, double c);

// grad f(z) + A^T (p + c (Az - b)).
Vector smooth_grad(const ProblemInstance& problem, const Vector& z, const Vector& p, double c);

// Splitting of lambda L_c(., p_prev) + (1/2)||. - z_prev||^2 into
// psi_s = lambda (f + <p_prev, A. - b> + (c/2)||A. - b||^2) + (1/4)||. - z_prev||^2 and
// psi_n = lambda h + (1/4)||. - z_prev||^2.
CompositeStructure build_subproblem(const ProblemInstance& problem, const Vector& z_prev, const Vector& p_prev,
                                    const PenaltyParams& params);

// The refinement formulas alone.
RefinedIterate refine_unchecked(const ProblemInstance& problem, const Vector& z_prev, const Vector& p_prev,
                                const Vector& z_k, const Vector& v_k, double eps_k, const PenaltyParams& params);

// Refinement of an inexact prox solution (z_k, v_k, eps_k). Checks the four refinement
// inequalities and throws InvariantViolation when one fails beyond 1e-8 relative tolerance.
RefinedIterate refine(const ProblemInstance& problem, const Vector& z_prev, const Vector& p_prev, const Vector& z_k,
                      const Vector& v_k, double eps_k, const PenaltyParams& params);

}  // namespace iapial
