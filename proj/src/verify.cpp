#include "iapial/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/core.h>

#include "iapial/errors.hpp"

namespace iapial {
namespace {

Matrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  }
  const Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

Vector constant_vector(int n, double v) { return Vector::Constant(n, v); }

}  // namespace

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::Box:
      return "box";
    case DomainKind::Ball:
      return "ball";
    case DomainKind::Simplex:
      return "simplex";
    case DomainKind::L1Box:
      return "l1_box";
  }
  return "unknown";
}

DomainKind parse_domain_kind(const std::string& s) {
  if (s == "box") return DomainKind::Box;
  if (s == "ball") return DomainKind::Ball;
  if (s == "simplex") return DomainKind::Simplex;
  if (s == "l1_box") return DomainKind::L1Box;
  throw ArgumentError(fmt::format("unknown domain kind '{}'", s));
}

void GeneratorSpec::check() const {
  if (n < 1 || l < 1) throw ArgumentError("n and l must be positive");
  if (l > n) throw ArgumentError(fmt::format("a full-rank A needs l <= n, got l = {} > n = {}", l, n));
  if (!(m_f > 0.0) || !(L_f >= m_f)) throw ArgumentError("need 0 < m_f <= L_f");
  if (n == 1 && m_f != L_f) throw ArgumentError("n = 1 forces m_f = L_f");
  if (!(radius > 0.0)) throw ArgumentError("radius must be positive");
  if (!(sv_min > 0.0) || !(sv_max >= sv_min)) throw ArgumentError("need 0 < sv_min <= sv_max");
  if (!(q_scale >= 0.0)) throw ArgumentError("q_scale must be nonnegative");
  if (!(slater_jitter >= 0.0) || !(slater_jitter < 1.0)) throw ArgumentError("slater_jitter must lie in [0, 1)");
  if (!(l1_scale >= 0.0)) throw ArgumentError("l1_scale must be nonnegative");
  if (l1_scale > 0.0 && kind != DomainKind::L1Box) throw ArgumentError("l1_scale needs the l1_box kind");
}

ProblemInstance generate(const GeneratorSpec& spec) {
  spec.check();
  const int n = spec.n, l = spec.l;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Q = U diag(eigs) U^T with lambda_min = -m_f and max |eig| = L_f.
  Vector eigs(n);
  eigs[0] = -spec.m_f;
  if (n >= 2) eigs[1] = spec.L_f;
  for (int i = 2; i < n; ++i) eigs[i] = -spec.m_f + unif(rng) * (spec.L_f + spec.m_f);
  const Matrix U = random_orthogonal(n, rng);
  Matrix Q = U * eigs.asDiagonal() * U.transpose();
  Q = 0.5 * (Q + Q.transpose()).eval();
  Vector q(n);
  for (int i = 0; i < n; ++i) q[i] = gauss(rng);
  q *= spec.q_scale / std::sqrt(static_cast<double>(n));

  Vector svals(l);
  svals[0] = spec.sv_max;
  if (l >= 2) svals[l - 1] = spec.sv_min;
  for (int i = 1; i + 1 < l; ++i) svals[i] = spec.sv_min + unif(rng) * (spec.sv_max - spec.sv_min);
  const Matrix Ul = random_orthogonal(l, rng);
  const Matrix V = random_orthogonal(n, rng).leftCols(l);
  const Matrix A = Ul * svals.asDiagonal() * V.transpose();

  Regularizer h;
  Vector zbar(n);
  const double j = spec.slater_jitter;
  switch (spec.kind) {
    case DomainKind::Box:
    case DomainKind::L1Box: {
      h.set = Box{constant_vector(n, spec.center - spec.radius), constant_vector(n, spec.center + spec.radius)};
      h.l1_scale = spec.kind == DomainKind::L1Box ? spec.l1_scale : 0.0;
      for (int i = 0; i < n; ++i) zbar[i] = spec.center + j * spec.radius * (2.0 * unif(rng) - 1.0);
      break;
    }
    case DomainKind::Ball: {
      h.set = Ball{constant_vector(n, spec.center), spec.radius};
      Vector g(n);
      for (int i = 0; i < n; ++i) g[i] = gauss(rng);
      zbar = constant_vector(n, spec.center) + j * spec.radius * unif(rng) * g.normalized();
      break;
    }
    case DomainKind::Simplex: {
      h.set = Simplex{n, spec.radius};
      // Equal coordinates a maximize min(a, (r - n a)/sqrt(n)).
      const double a = spec.radius / (n + std::sqrt(static_cast<double>(n)));
      Vector xi(n);
      for (int i = 0; i < n; ++i) xi[i] = 2.0 * unif(rng) - 1.0;
      if (n > 1) xi.array() -= xi.mean();
      for (int i = 0; i < n; ++i) zbar[i] = a * (1.0 + 0.5 * j * xi[i]);
      break;
    }
  }

  ConvexComposite hc;
  hc.h = h;
  hc.L_h = lipschitz_constant(h);
  hc.slater_point = zbar;

  std::optional<double> phi_lower;
  if (spec.certify_phi_lower) {
    const double R0 = max_norm(h.set);
    phi_lower = -0.5 * spec.m_f * R0 * R0 - q.norm() * R0 + minimum_value(h);
  }
  Vector b = A * zbar;
  return ProblemInstance(SmoothObjective::quadratic_objective(Q, q, spec.m_f, spec.L_f), hc,
                         LinearConstraint(A, b), phi_lower);
}

double finite_diff_grad_check(const std::function<double(const Vector&)>& value,
                              const std::function<Vector(const Vector&)>& gradient, const std::vector<Vector>& points,
                              std::optional<double> step) {
  double worst = 0.0;
  for (const Vector& z : points) {
    const double h = step.value_or(std::exp2(std::floor(std::log2(1e-6 * (1.0 + z.norm())))));
    const Vector g = gradient(z);
    const double floor_g = std::max(1e-3 * g.cwiseAbs().maxCoeff(), 1e-12);
    Vector zp = z, zm = z;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      zp[i] = z[i] + h;
      zm[i] = z[i] - h;
      const double fd = (value(zp) - value(zm)) / (2.0 * h);
      zp[i] = z[i];
      zm[i] = z[i];
      worst = std::max(worst, std::abs(fd - g[i]) / std::max(std::abs(g[i]), floor_g));
    }
  }
  return worst;
}

SubgradientCheck sampled_subgradient_check(const std::function<double(const Vector&)>& psi, const DomainSet& set,
                                           const Vector& z, const Vector& u, double eps, int uniform_samples,
                                           int boundary_samples, std::uint64_t seed) {
  SubgradientCheck out;
  out.seed = seed;
  out.samples = uniform_samples + boundary_samples;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  const double pz = psi(z);
  for (int s = 0; s < out.samples; ++s) {
    const Vector zp = sample_point(set, rng, s >= uniform_samples);
    const double pzp = psi(zp);
    const double lin = u.dot(zp - z);
    const double margin = pz + lin - eps - pzp;
    const double scale = 1.0 + std::abs(pz) + std::abs(pzp) + std::abs(lin);
    if (margin > out.worst_margin) {
      out.worst_margin = margin;
      out.worst_point = zp;
    }
    if (margin > 1e-9 * scale) out.passed = false;
  }
  return out;
}

SubgradientCheck eps_subdiff_check(const Regularizer& h, const Vector& z, const Vector& u, double eps,
                                   int uniform_samples, int boundary_samples, std::uint64_t seed) {
  return sampled_subgradient_check([&h](const Vector& x) { return value(h, x); }, h.set, z, u, eps, uniform_samples,
                                   boundary_samples, seed);
}

double inclusion_residual(const Vector& z_hat, const Vector& w_hat, const Vector& p_hat,
                          const ProblemInstance& problem, std::optional<double> t) {
  const double step = t.value_or(1.0 / problem.smooth().L_f);
  if (!(step > 0.0)) throw ArgumentError("inclusion_residual needs t > 0");
  const Vector g = problem.grad_f(z_hat) + problem.constraint().A.transpose() * p_hat - w_hat;
  return (z_hat - problem.composite().prox(step, z_hat - step * g)).norm();
}

std::string to_string(MonitorStatus s) {
  switch (s) {
    case MonitorStatus::Pass:
      return "pass";
    case MonitorStatus::Fail:
      return "fail";
    case MonitorStatus::Skipped:
      return "skipped";
  }
  return "unknown";
}

bool MonitorReport::passed() const {
  return std::none_of(entries.begin(), entries.end(),
                      [](const MonitorEntry& e) { return e.status == MonitorStatus::Fail; });
}

const MonitorEntry* MonitorReport::find(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.inequality_id == id) return &e;
  }
  return nullptr;
}

std::vector<std::string> MonitorReport::failing_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : entries) {
    if (e.status == MonitorStatus::Fail) ids.push_back(e.inequality_id);
  }
  return ids;
}

namespace {

class Check {
 public:
  Check(std::string id, std::string formula, bool gated = false, bool available = true) {
    entry_.inequality_id = std::move(id);
    entry_.paper_ref = std::move(formula);
    entry_.worst_slack = std::numeric_limits<double>::infinity();
    gated_ = gated;
    available_ = available;
  }

  bool available() const { return available_; }

  // lhs <= rhs up to 1e-8 (1 + |rhs| + extra).
  void leq(int cycle, int k, double lhs, double rhs, double extra = 0.0) {
    if (!available_) return;
    ++entry_.checked;
    const double slack = rhs - lhs;
    if (slack < entry_.worst_slack) {
      entry_.worst_slack = slack;
      entry_.at_cycle = cycle;
      entry_.at_iteration = k;
    }
    if (lhs > rhs + 1e-8 * (1.0 + std::abs(rhs) + extra)) entry_.status = MonitorStatus::Fail;
  }

  MonitorEntry finish() const {
    MonitorEntry e = entry_;
    if (!available_ || (gated_ && e.checked == 0)) e.status = MonitorStatus::Skipped;
    if (e.checked == 0) e.worst_slack = 0.0;
    return e;
  }

 private:
  MonitorEntry entry_;
  bool gated_ = false;
  bool available_ = true;
};

}  // namespace

MonitorReport monitor(const std::vector<CycleHistory>& cycles, const TheoreticalConstants& constants,
                      const TolerancePair& tol) {
  const bool have_lower = constants.phi_lower.has_value();
  const bool have_R = constants.R_star.has_value();
  const double phi_lo = constants.phi_lower.value_or(0.0);
  const double R = constants.R_star.value_or(0.0);
  const double p_bound = constants.multiplier_bound();

  Check telescoping("lagrangian_telescoping",
                    "||r_k||^2 <= 2 lambda/(1 - sigma_c^2) (L_c(z_{k-1},p_{k-1}) - L_c(z_k,p_k) + ||p_k - p_{k-1}||^2/c)");
  Check w_descent("w_hat_descent",
                  "||w_hat_k||^2 <= (C1/lambda) (L_c(z_{k-1},p_{k-1}) - L_c(z_k,p_k) + ||p_k - p_{k-1}||^2/c)");
  Check multiplier("multiplier_bound", "||p_k|| <= kappa0/dbar");
  Check feasibility("feasibility_bound", "||A z_hat_k - b|| <= kappa2/c");
  Check lower("lagrangian_lower_bound", "L_c(z_k,p_k) >= phi_lower - ||p_k||^2/(2c)", false, have_lower);
  Check first("first_lagrangian_bound", "L_c(z_1,p_1) <= 3 R* + phi_lower", false, have_R && have_lower);
  Check delta("delta_k_bound", "Delta_k <= (3 R* + ||p_k||^2/(2c))/(k - 1), k >= 2", true, have_R);
  Check min_w("min_w_hat_bound",
              "min_{i<=k} ||w_hat_i||^2 <= (C1/lambda) (Delta_k + 4/(c (k-1)) sum_{i<=k} ||p_i||^2), k >= 2", true);
  Check r_bound("residual_norm_bound", "||r_k|| <= D/(1 - sigma)");
  Check gipp("relative_error_test", "||v_k||^2 + 2 eps_k <= sigma_c^2 ||r_k||^2");
  Check ref_w("refine_w", "lambda ||w_k|| <= (1 + sigma_c sqrt(lambda L_c + 1)) ||r_k||");
  Check ref_delta("refine_delta", "delta_k <= sigma_c^2 ||r_k||^2/(2 lambda)");
  Check ref_w_hat("refine_w_hat", "lambda ||w_hat_k|| <= (1 + 2 sigma_c sqrt(lambda L_c + 1)) ||r_k||");
  Check ref_shift("refine_shift", "||z_hat_k - z_k|| <= sqrt(2 eps_k/(lambda L_c + 1))");
  Check inner("inner_iteration_bound", "ACG iterations <= ceil(1 + sqrt(T_c) log_1^+(2 T_c/min{nu, sigma}))");
  Check outer("outer_iteration_bound",
              "outer iterations <= ceil(1 + 4(1+2nu)^2/((1-sigma^2) lambda rho^2) (3 R* + kappa0^2/(2 dbar^2 c)))", false,
              have_R);

  for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
    const CycleHistory& hist = cycles[ci];
    const int cycle = static_cast<int>(ci) + 1;
    const PenaltyParams& prm = hist.params;
    const double c = hist.c;
    const double lam = prm.lambda;
    const double sc = prm.sigma_c;
    const double alpha = lam * prm.L_c + 1.0;
    const double tele = 2.0 * lam / (1.0 - sc * sc);
    const double c1_lam = constants.C1 / lam;
    const int inner_cap = inner_iteration_bound(prm);

    double sum_p2 = 0.0;
    double min_w2 = std::numeric_limits<double>::infinity();
    double L1 = 0.0;
    for (const OuterRecord& r : hist.records) {
      const int k = r.k;
      const double dp2 = r.norm_dp * r.norm_dp;
      const double dL = r.lagrangian_prev - r.lagrangian + dp2 / c;
      const double lmag = std::abs(r.lagrangian_prev) + std::abs(r.lagrangian);
      telescoping.leq(cycle, k, r.norm_r * r.norm_r, tele * dL, tele * lmag);
      w_descent.leq(cycle, k, r.norm_w_hat * r.norm_w_hat, c1_lam * dL, c1_lam * lmag);
      multiplier.leq(cycle, k, r.norm_p, p_bound);
      feasibility.leq(cycle, k, r.feas_hat, constants.kappa2 / c);
      lower.leq(cycle, k, phi_lo - r.norm_p * r.norm_p / (2.0 * c), r.lagrangian);
      if (k == 1) {
        L1 = r.lagrangian;
        first.leq(cycle, k, r.lagrangian, 3.0 * R + phi_lo);
      }
      sum_p2 += r.norm_p * r.norm_p;
      min_w2 = std::min(min_w2, r.norm_w_hat * r.norm_w_hat);
      if (k >= 2) {
        const double dk = (L1 - r.lagrangian) / (k - 1);
        const double dmag = (std::abs(L1) + std::abs(r.lagrangian)) / (k - 1);
        delta.leq(cycle, k, dk, (3.0 * R + r.norm_p * r.norm_p / (2.0 * c)) / (k - 1), dmag);
        min_w.leq(cycle, k, min_w2, c1_lam * (dk + 4.0 / (c * (k - 1)) * sum_p2), c1_lam * dmag);
      }
      r_bound.leq(cycle, k, r.norm_r, constants.D / (1.0 - prm.sigma));
      gipp.leq(cycle, k, r.norm_v * r.norm_v + 2.0 * r.eps, sc * sc * r.norm_r * r.norm_r);
      ref_w.leq(cycle, k, lam * r.norm_w, (1.0 + sc * std::sqrt(alpha)) * r.norm_r);
      ref_delta.leq(cycle, k, r.delta, sc * sc * r.norm_r * r.norm_r / (2.0 * lam));
      ref_w_hat.leq(cycle, k, lam * r.norm_w_hat, (1.0 + 2.0 * sc * std::sqrt(alpha)) * r.norm_r);
      ref_shift.leq(cycle, k, r.zhat_shift, std::sqrt(2.0 * r.eps / alpha));
      inner.leq(cycle, k, r.inner_iters, inner_cap);
    }
    if (outer.available() && !hist.records.empty()) {
      const auto bound = outer_iteration_bound(constants, prm.nu, prm.sigma, tol.rho_hat, c);
      outer.leq(cycle, static_cast<int>(hist.records.size()), static_cast<double>(hist.records.size()), *bound);
    }
  }

  MonitorReport report;
  for (const Check* ch : {&telescoping, &w_descent, &multiplier, &feasibility, &lower, &first, &delta, &min_w,
                          &r_bound, &gipp, &ref_w, &ref_delta, &ref_w_hat, &ref_shift, &inner, &outer}) {
    report.entries.push_back(ch->finish());
  }
  return report;
}

}  // namespace iapial
