#pragma once

#include <cstdint>

#include "iapial/problem.hpp"
#include "iapial/verify.hpp"

namespace iapial::testing {

// Instance family used by the end-to-end checks: small curvature and a tiny box keep the
// large-penalty threshold near 1e8, where a direct solve at that penalty is still affordable.
inline GeneratorSpec benchmark_spec(std::uint64_t seed) {
  GeneratorSpec g;
  g.n = 50;
  g.l = 10;
  g.m_f = 1e-3;
  g.L_f = 0.05;
  g.kind = DomainKind::Box;
  g.radius = 0.01;
  g.sv_min = 0.05;
  g.sv_max = 0.075;
  g.q_scale = 5e-3;
  g.slater_jitter = 0.1;
  g.seed = seed;
  return g;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Regularizer box(int n, double lo, double hi) {
  return {Box{Vector::Constant(n, lo), Vector::Constant(n, hi)}, 0.0};
}

// f(z) = 0.5 z'Qz + q'z on a box with constraint A z = b and Slater point zbar.
inline ProblemInstance quadratic_instance(const Matrix& Q, const Vector& q, double m_f, double L_f, Regularizer h,
                                          const Matrix& A, const Vector& b, const Vector& zbar,
                                          std::optional<double> phi_lower = std::nullopt) {
  ConvexComposite hc{std::move(h), 0.0, zbar};
  hc.L_h = lipschitz_constant(hc.h);
  return ProblemInstance(SmoothObjective::quadratic_objective(Q, q, m_f, L_f), std::move(hc), LinearConstraint(A, b),
                         phi_lower);
}

}  // namespace iapial::testing
