#include "iapial/aug_lagrangian.hpp"

#include <cmath>
#include <memory>

#include <fmt/core.h>

#include "iapial/errors.hpp"

namespace iapial {
namespace {

void check_leq(const char* what, double lhs, double rhs) {
  const double tol = 1e-8 * (1.0 + std::abs(lhs) + std::abs(rhs));
  if (lhs > rhs + tol) {
    throw InvariantViolation(fmt::format("refinement inequality '{}' violated: {:.17g} > {:.17g}", what, lhs, rhs));
  }
}

}  // namespace

PenaltyParams PenaltyParams::make(const ProblemInstance& problem, double c, double nu, double sigma) {
  if (!(c > 0.0)) throw ArgumentError("penalty parameter c must be positive");
  if (!(nu > 0.0)) throw ArgumentError("nu must be positive");
  if (!(sigma > 0.0) || sigma > 1.0 / std::sqrt(2.0) + 1e-15) {
    throw ArgumentError("sigma must lie in (0, 1/sqrt(2)]");
  }
  PenaltyParams p;
  p.c = c;
  p.nu = nu;
  p.sigma = sigma;
  p.lambda = 1.0 / (2.0 * problem.smooth().m_f);
  const double a = problem.constraint().op_norm;
  p.L_c = problem.smooth().L_f + c * a * a;
  p.sigma_c = std::min(nu / std::sqrt(p.lambda * p.L_c + 1.0), sigma);
  p.M_s = p.lambda * p.L_c + 0.5;
  p.mu = 0.5;
  return p;
}

double lagrangian_value(const ProblemInstance& problem, const Vector& z, const Vector& p, double c) {
  const double hz = problem.h(z);
  if (!std::isfinite(hz)) throw ArgumentError("augmented Lagrangian evaluated outside the domain");
  const Vector res = problem.constraint().residual(z);
  return problem.f(z) + hz + p.dot(res) + 0.5 * c * res.squaredNorm();
}

Vector smooth_grad(const ProblemInstance& problem, const Vector& z, const Vector& p, double c) {
  const auto& con = problem.constraint();
  return problem.grad_f(z) + con.A.transpose() * (p + c * con.residual(z));
}

CompositeStructure build_subproblem(const ProblemInstance& problem, const Vector& z_prev, const Vector& p_prev,
                                    const PenaltyParams& params) {
  // The structure outlives this call, so it owns copies of the centers.
  const auto ctx = std::make_shared<const std::tuple<const ProblemInstance*, Vector, Vector, PenaltyParams>>(
      &problem, z_prev, p_prev, params);
  CompositeStructure cs;
  cs.smooth_value = [ctx](const Vector& z) {
    const auto& [pb, zp, pp, prm] = *ctx;
    const Vector res = pb->constraint().residual(z);
    return prm.lambda * (pb->f(z) + pp.dot(res) + 0.5 * prm.c * res.squaredNorm()) + 0.25 * (z - zp).squaredNorm();
  };
  cs.smooth_grad = [ctx](const Vector& z) -> Vector {
    const auto& [pb, zp, pp, prm] = *ctx;
    return prm.lambda * smooth_grad(*pb, z, pp, prm.c) + 0.5 * (z - zp);
  };
  if (problem.smooth().bregman) {
    cs.smooth_bregman = [ctx](const Vector& x, const Vector& y) {
      const auto& [pb, zp, pp, prm] = *ctx;
      const Vector d = x - y;
      const double pen = (pb->constraint().A * d).squaredNorm();
      return prm.lambda * (pb->smooth().bregman(x, y) + 0.5 * prm.c * pen) + 0.25 * d.squaredNorm();
    };
  }
  cs.nonsmooth_value = [ctx](const Vector& z) {
    const auto& [pb, zp, pp, prm] = *ctx;
    return prm.lambda * pb->h(z) + 0.25 * (z - zp).squaredNorm();
  };
  // Completing the square: prox_{t psi_n}(x) = prox_{(lambda t/(1 + t/2)) h}((x + (t/2) z_prev)/(1 + t/2)).
  cs.nonsmooth_prox = [ctx](double t, const Vector& x) -> Vector {
    const auto& [pb, zp, pp, prm] = *ctx;
    const double s = 1.0 + 0.5 * t;
    return pb->composite().prox(prm.lambda * t / s, (x + 0.5 * t * zp) / s);
  };
  cs.M_s = params.M_s;
  cs.mu = params.mu;
  return cs;
}

RefinedIterate refine_unchecked(const ProblemInstance& problem, const Vector& z_prev, const Vector& p_prev,
                                const Vector& z_k, const Vector& v_k, double eps_k, const PenaltyParams& params) {
  const auto& con = problem.constraint();
  const double lam = params.lambda;
  const double alpha = lam * params.L_c + 1.0;
  const double c = params.c;

  RefinedIterate out;
  out.r = v_k + z_prev - z_k;
  const Vector grad_z = smooth_grad(problem, z_k, p_prev, c);
  // argmin_u { <lam grad g(z_k) - r_k, u> + lam h(u) + (alpha/2)||u - z_k||^2 }.
  out.z_hat = problem.composite().prox(lam / alpha, z_k - (lam * grad_z - out.r) / alpha);
  out.w = (out.r + alpha * (z_k - out.z_hat)) / lam;
  out.delta = eps_k / lam;
  out.w_hat = out.w + smooth_grad(problem, out.z_hat, p_prev, c) - grad_z;
  out.p_hat = p_prev + c * con.residual(out.z_hat);
  out.p = p_prev + c * con.residual(z_k);
  return out;
}

RefinedIterate refine(const ProblemInstance& problem, const Vector& z_prev, const Vector& p_prev, const Vector& z_k,
                      const Vector& v_k, double eps_k, const PenaltyParams& params) {
  RefinedIterate out = refine_unchecked(problem, z_prev, p_prev, z_k, v_k, eps_k, params);
  const double lam = params.lambda;
  const double alpha = lam * params.L_c + 1.0;
  const double norm_r = out.r.norm();
  const double sq = std::sqrt(alpha);
  const double sc = params.sigma_c;
  check_leq("lambda ||w_k|| <= (1 + sigma_c sqrt(lambda L_c + 1)) ||r_k||", lam * out.w.norm(), (1.0 + sc * sq) * norm_r);
  check_leq("delta_k <= sigma_c^2 ||r_k||^2 / (2 lambda)", out.delta, sc * sc * norm_r * norm_r / (2.0 * lam));
  check_leq("lambda ||w_hat_k|| <= (1 + 2 sigma_c sqrt(lambda L_c + 1)) ||r_k||", lam * out.w_hat.norm(),
            (1.0 + 2.0 * sc * sq) * norm_r);
  check_leq("||z_hat_k - z_k|| <= sqrt(2 eps_k / (lambda L_c + 1))", (out.z_hat - z_k).norm(),
            std::sqrt(2.0 * eps_k / alpha));
  return out;
}

}  // namespace iapial
