#include "iapial/problem.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <fmt/core.h>

#include "iapial/errors.hpp"

namespace iapial {

SmoothObjective SmoothObjective::quadratic_objective(Matrix Q, Vector q, double m_f, double L_f) {
  if (Q.rows() != Q.cols() || Q.rows() != q.size()) {
    throw StructuralError("quadratic objective needs square Q matching q");
  }
  SmoothObjective f;
  f.quadratic = QuadraticForm{std::move(Q), std::move(q)};
  const auto form = std::make_shared<const QuadraticForm>(*f.quadratic);
  f.value = [form](const Vector& z) { return 0.5 * z.dot(form->Q * z) + form->q.dot(z); };
  f.gradient = [form](const Vector& z) -> Vector { return form->Q * z + form->q; };
  f.bregman = [form](const Vector& x, const Vector& y) {
    const Vector d = x - y;
    return 0.5 * d.dot(form->Q * d);
  };
  f.m_f = m_f;
  f.L_f = L_f;
  return f;
}

OperatorNorms operator_norms(const Matrix& A) {
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) {
    throw AssumptionError("constraint operator A must be nonzero");
  }
  const Eigen::JacobiSVD<Matrix> svd(A);
  const Vector& s = svd.singularValues();
  OperatorNorms out;
  out.op_norm = s[0];
  const double cutoff = 1e-12 * out.op_norm;
  out.sigma_plus = out.op_norm;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) out.sigma_plus = s[i];
  }
  return out;
}

LinearConstraint::LinearConstraint(Matrix A_in, Vector b_in) : A(std::move(A_in)), b(std::move(b_in)) {
  if (A.rows() != b.size()) {
    throw StructuralError(fmt::format("A has {} rows but b has {} entries", A.rows(), b.size()));
  }
  const OperatorNorms norms = operator_norms(A);
  op_norm = norms.op_norm;
  sigma_plus = norms.sigma_plus;
}

void TolerancePair::check() const {
  if (!(rho_hat > 0.0) || !(eta_hat > 0.0)) throw ArgumentError("tolerances must be positive");
}

double grad_bound(const SmoothObjective& f, const ConvexComposite& domain, const Vector& y) {
  if (!domain.contains(y)) throw ArgumentError("grad_bound anchor must lie in the domain");
  return f.gradient(y).norm() + f.L_f * domain.diameter();
}

ProblemInstance::ProblemInstance(SmoothObjective smooth, ConvexComposite composite, LinearConstraint constraint,
                                 std::optional<double> phi_lower)
    : smooth_(std::move(smooth)),
      composite_(std::move(composite)),
      constraint_(std::move(constraint)),
      phi_lower_(phi_lower) {
  check_regularizer(composite_.h);
  const Eigen::Index n = constraint_.cols();
  if (composite_.dim() != n) {
    throw StructuralError(fmt::format("domain has dimension {} but A has {} columns", composite_.dim(), n));
  }
  if (composite_.slater_point.size() != n) throw StructuralError("Slater point has the wrong dimension");
  if (!smooth_.value || !smooth_.gradient) throw StructuralError("smooth objective oracles are missing");
  if (smooth_.quadratic && smooth_.quadratic->Q.rows() != n) {
    throw StructuralError("quadratic objective dimension does not match A");
  }
  if (!smooth_.grad_bound && composite_.contains(composite_.slater_point)) {
    smooth_.grad_bound = iapial::grad_bound(smooth_, composite_, composite_.slater_point);
  }
  if (!smooth_.grad_bound) smooth_.grad_bound = std::numeric_limits<double>::infinity();
}

bool ValidationReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const AssumptionCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Vector sample_point(const DomainSet& set, std::mt19937_64& rng, bool boundary_biased) {
  const int n = dimension(set);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (boundary_biased) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g[i] = gauss(rng);
    const double scale = 3.0 * (max_norm(set) + 1.0);
    const Vector center = project(set, Vector::Zero(n));
    return project(set, center + scale * g.normalized());
  }
  if (const auto* b = std::get_if<Box>(&set)) {
    Vector z(n);
    for (int i = 0; i < n; ++i) z[i] = b->lower[i] + unif(rng) * (b->upper[i] - b->lower[i]);
    return z;
  }
  if (const auto* b = std::get_if<Ball>(&set)) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g[i] = gauss(rng);
    const double r = b->radius * std::pow(unif(rng), 1.0 / n);
    return b->center + r * g.normalized();
  }
  // Uniform on {z >= 0, sum z <= r}: first n of n+1 normalized exponentials.
  const auto& s = std::get<Simplex>(set);
  std::exponential_distribution<double> expo(1.0);
  Vector e(n + 1);
  for (int i = 0; i <= n; ++i) e[i] = expo(rng);
  return s.radius * e.head(n) / e.sum();
}

ValidationReport validate(const ProblemInstance& instance, int samples, std::uint64_t seed) {
  const auto& f = instance.smooth();
  const auto& hc = instance.composite();
  const auto& con = instance.constraint();
  const Vector& zbar = hc.slater_point;

  // Hard failures first.
  const double feas = con.residual(zbar).norm();
  if (feas > 1e-10 * (1.0 + con.b.norm())) {
    throw AssumptionError(fmt::format("Slater point is infeasible: ||A zbar - b|| = {:.3e}", feas));
  }
  if (!hc.contains(zbar)) throw AssumptionError("Slater point lies outside the domain");
  const double dbar = hc.slater_distance();
  if (!(dbar > 0.0)) throw AssumptionError(fmt::format("Slater point is not interior (dbar = {:.3e})", dbar));

  ValidationReport report;
  report.seed = seed;
  report.samples = samples;
  auto add = [&](std::string name, double worst, std::string detail = {}) {
    report.checks.push_back({std::move(name), worst <= 0.0, worst, std::move(detail)});
  };

  add("0 < m_f <= L_f", std::max(f.m_f <= 0.0 ? 1.0 : 0.0, f.m_f - f.L_f),
      fmt::format("m_f = {}, L_f = {}", f.m_f, f.L_f));
  add("A nonzero", con.op_norm > 0.0 ? -con.op_norm : 1.0);
  add("bounded domain", std::isfinite(hc.diameter()) ? -1.0 : 1.0, fmt::format("D = {}", hc.diameter()));
  add("Slater point interior", -dbar, fmt::format("dbar = {}", dbar));
  add("A zbar = b", feas - 1e-10 * (1.0 + con.b.norm()));

  std::mt19937_64 rng(seed);
  double worst_lip = -std::numeric_limits<double>::infinity();
  double worst_curv = worst_lip, worst_hlip = worst_lip, worst_prox = worst_lip, worst_gb = worst_lip;
  double worst_sv = worst_lip;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const bool biased = (s % 4) == 3;
    const Vector z = sample_point(hc.h.set, rng, biased);
    const Vector zp = sample_point(hc.h.set, rng, !biased && (s % 3) == 0);
    const double dist = (zp - z).norm();
    const Vector gz = f.gradient(z);
    const Vector gzp = f.gradient(zp);
    const double scale = 1e-10 * (1.0 + gz.norm() + gzp.norm());
    worst_lip = std::max(worst_lip, (gzp - gz).norm() - f.L_f * dist - scale);
    const double fz = f.value(z), fzp = f.value(zp);
    const double fscale = 1e-10 * (1.0 + std::abs(fz) + std::abs(fzp));
    worst_curv = std::max(worst_curv, -(fzp - fz - gz.dot(zp - z)) - 0.5 * f.m_f * dist * dist - fscale);
    worst_hlip = std::max(worst_hlip, std::abs(hc.value(z) - hc.value(zp)) - hc.L_h * dist - fscale);
    worst_gb = std::max(worst_gb, gz.norm() - instance.grad_bound() - scale);
    Vector x(z.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 2.0 * (hc.diameter() + 1.0) * gauss(rng);
    const Vector px = hc.prox(0.5 + s % 5, x);
    worst_prox = std::max(worst_prox, hc.contains(px) && std::isfinite(hc.value(px)) ? -1.0 : 1.0);
    Vector u(con.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = gauss(rng);
    const Vector range_u = con.A * (con.A.transpose() * u);  // an element of range(A)
    worst_sv = std::max(worst_sv, con.sigma_plus * range_u.norm() - (con.A.transpose() * range_u).norm() -
                                      1e-10 * (1.0 + con.op_norm * range_u.norm()));
  }
  if (samples > 0) {
    add("gradient Lipschitz (L_f)", worst_lip);
    add("lower curvature (m_f)", worst_curv);
    add("h Lipschitz (L_h)", worst_hlip);
    add("grad_bound dominates ||grad f||", worst_gb);
    add("prox output in H", worst_prox);
    add("sigma_plus ||u|| <= ||A^T u|| on range(A)", worst_sv);
  }
  return report;
}

bool stationarity_check(const ProblemInstance& instance, const Vector& z, const Vector& w, const TolerancePair& tol) {
  return w.norm() <= tol.rho_hat && instance.constraint().residual(z).norm() <= tol.eta_hat;
}

}  // namespace iapial
