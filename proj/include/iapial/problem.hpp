#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "iapial/prox.hpp"
#include "iapial/types.hpp"

namespace iapial {

// f(z) = 0.5 z'Qz + q'z; kept alongside the oracles so instances can be serialized.
struct QuadraticForm {
  Matrix Q;
  Vector q;
};

struct SmoothObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  // Optional f(x) - f(y) - <grad f(y), x - y>; exact for quadratics.
  std::function<double(const Vector&, const Vector&)> bregman;
  double m_f = 1.0;  // weak-convexity modulus
  double L_f = 1.0;  // gradient Lipschitz constant
  std::optional<double> grad_bound;
  std::optional<QuadraticForm> quadratic;

  static SmoothObjective quadratic_objective(Matrix Q, Vector q, double m_f, double L_f);
};

// The composite term h together with the geometry of its domain H.
struct ConvexComposite {
  Regularizer h;
  double L_h = 0.0;
  Vector slater_point;

  double value(const Vector& z) const { return iapial::value(h, z); }
  Vector prox(double t, const Vector& x) const { return iapial::prox(h, t, x); }
  bool contains(const Vector& z, double tol = 1e-12) const { return iapial::contains(h.set, z, tol); }
  Vector project(const Vector& x) const { return iapial::project(h.set, x); }
  double diameter() const { return iapial::diameter(h.set); }
  // dist of the Slater point to the boundary of H.
  double slater_distance() const { return boundary_distance(h.set, slater_point); }
  int dim() const { return dimension(h.set); }
};

struct OperatorNorms {
  double op_norm = 0.0;     // largest singular value
  double sigma_plus = 0.0;  // smallest singular value above 1e-12 * op_norm
};

// Throws AssumptionError for an all-zero matrix.
OperatorNorms operator_norms(const Matrix& A);

struct LinearConstraint {
  Matrix A;
  Vector b;
  double op_norm = 0.0;
  double sigma_plus = 0.0;

  // Computes the norms from the SVD of A.
  LinearConstraint(Matrix A_in, Vector b_in);
  LinearConstraint() = default;

  Vector residual(const Vector& z) const { return A * z - b; }
  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index cols() const { return A.cols(); }
};

struct TolerancePair {
  double rho_hat = 1e-3;
  double eta_hat = 1e-3;

  void check() const;
};

// ||grad f(y)|| + L_f D; majorizes ||grad f|| on H. Throws ArgumentError when y is outside H.
double grad_bound(const SmoothObjective& f, const ConvexComposite& domain, const Vector& y);

class ProblemInstance {
 public:
  // Throws StructuralError on dimension mismatch. Fills smooth.grad_bound from the Slater point
  // when it was not declared.
  ProblemInstance(SmoothObjective smooth, ConvexComposite composite, LinearConstraint constraint,
                  std::optional<double> phi_lower = std::nullopt);

  const SmoothObjective& smooth() const { return smooth_; }
  const ConvexComposite& composite() const { return composite_; }
  const LinearConstraint& constraint() const { return constraint_; }
  const std::optional<double>& phi_lower() const { return phi_lower_; }

  Eigen::Index n() const { return constraint_.cols(); }
  Eigen::Index l() const { return constraint_.rows(); }

  double f(const Vector& z) const { return smooth_.value(z); }
  Vector grad_f(const Vector& z) const { return smooth_.gradient(z); }
  double h(const Vector& z) const { return composite_.value(z); }
  double phi(const Vector& z) const { return f(z) + h(z); }
  double grad_bound() const { return *smooth_.grad_bound; }

 private:
  SmoothObjective smooth_;
  ConvexComposite composite_;
  LinearConstraint constraint_;
  std::optional<double> phi_lower_;
};

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;  // worst observed violation (<= 0 means satisfied)
  std::string detail;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<AssumptionCheck> checks;

  bool all_passed() const;
  const AssumptionCheck* find(const std::string& name) const;
};

// Spot-checks the standing assumptions by sampling. Throws AssumptionError when the Slater
// certificate is invalid (A zbar != b, or zbar not interior).
ValidationReport validate(const ProblemInstance& instance, int samples = 200, std::uint64_t seed = 0);

// True iff ||w|| <= rho_hat and ||Az - b|| <= eta_hat. The inclusion itself is certified elsewhere.
bool stationarity_check(const ProblemInstance& instance, const Vector& z, const Vector& w, const TolerancePair& tol);

// Random points of H; boundary_biased draws project far-away Gaussian points onto H.
Vector sample_point(const DomainSet& set, std::mt19937_64& rng, bool boundary_biased = false);

}  // namespace iapial
