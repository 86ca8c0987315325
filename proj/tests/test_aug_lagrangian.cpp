#include <gtest/gtest.h>

#include <random>

#include "iapial/acg.hpp"
#include "iapial/aug_lagrangian.hpp"
#include "iapial/errors.hpp"
#include "iapial/verify.hpp"
#include "support.hpp"

using namespace iapial;
using iapial::testing::box;
using iapial::testing::quadratic_instance;
using iapial::testing::vec;

namespace {

ProblemInstance small_generated(std::uint64_t seed) {
  GeneratorSpec g;
  g.n = 6;
  g.l = 2;
  g.seed = seed;
  return generate(g);
}

// f = 0.5 z'Qz + q'z, A = I, b = 0 on [-5, 5]^2.
ProblemInstance identity_constraint(const Matrix& Q, const Vector& q, double m_f, double L_f) {
  return quadratic_instance(Q, q, m_f, L_f, box(2, -5.0, 5.0), Matrix::Identity(2, 2), Vector::Zero(2),
                            Vector::Zero(2));
}

}  // namespace

TEST(PenaltyParams, DerivedValues) {
  const auto pb = small_generated(0);
  const double opn = pb.constraint().op_norm;
  const auto prm = PenaltyParams::make(pb, 3.0, 0.2, 0.6);
  EXPECT_DOUBLE_EQ(prm.lambda, 0.5);
  EXPECT_NEAR(prm.L_c, 4.0 + 3.0 * opn * opn, 1e-12);
  EXPECT_NEAR(prm.sigma_c, std::min(0.2 / std::sqrt(prm.lambda * prm.L_c + 1.0), 0.6), 1e-15);
  EXPECT_NEAR(prm.M_s, prm.lambda * prm.L_c + 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(prm.mu, 0.5);
  EXPECT_GT(prm.sigma_c, 0.0);
  EXPECT_LE(prm.sigma_c, prm.sigma);
  EXPECT_GT(prm.M_s, prm.mu);
  EXPECT_THROW(PenaltyParams::make(pb, 0.0, 1.0, 0.5), ArgumentError);
}

TEST(LagrangianValue, FeasiblePointIgnoresPenalty) {
  const auto pb = identity_constraint(Matrix::Identity(2, 2), vec({1.0, 0.0}), 1.0, 1.0);
  const Vector z = Vector::Zero(2);
  for (double c : {0.1, 10.0}) EXPECT_DOUBLE_EQ(lagrangian_value(pb, z, vec({3.0, -4.0}), c), pb.phi(z));
}

TEST(LagrangianValue, PenaltyTerm) {
  const auto pb = identity_constraint(Matrix::Identity(2, 2), vec({1.0, 0.0}), 1.0, 1.0);
  const Vector z = vec({0.6, 0.8});
  EXPECT_NEAR(lagrangian_value(pb, z, Vector::Zero(2), 2.0), pb.phi(z) + 1.0, 1e-15);
  const Vector p = vec({0.3, 0.1});
  const double l1 = lagrangian_value(pb, z, p, 1.5);
  const double l2 = lagrangian_value(pb, z, p, 3.0);
  EXPECT_NEAR(l2 - l1, 0.75 * pb.constraint().residual(z).squaredNorm(), 1e-14);
}

TEST(LagrangianValue, OutsideDomainThrows) {
  const auto pb = identity_constraint(Matrix::Identity(2, 2), Vector::Zero(2), 1.0, 1.0);
  EXPECT_THROW(lagrangian_value(pb, vec({6.0, 0.0}), Vector::Zero(2), 1.0), ArgumentError);
}

TEST(SmoothGrad, FeasibleZeroMultiplier) {
  const auto pb = small_generated(1);
  const Vector z = pb.composite().slater_point;
  EXPECT_TRUE(smooth_grad(pb, z, Vector::Zero(2), 5.0).isApprox(pb.grad_f(z), 1e-12));
}

TEST(SmoothGrad, IdentityConstraint) {
  const auto pb = identity_constraint(Matrix::Zero(2, 2), Vector::Zero(2), 1.0, 1.0);
  const Vector z = vec({0.5, -1.5});
  const Vector p = vec({2.0, 1.0});
  EXPECT_TRUE(smooth_grad(pb, z, p, 1.0).isApprox(z + p));
}

TEST(SmoothGrad, FiniteDifferenceAgreement) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pb = small_generated(seed);
    const Vector p = vec({0.7, -0.2});
    const double c = 4.0;
    auto smooth_part = [&](const Vector& z) {
      const Vector r = pb.constraint().residual(z);
      return pb.f(z) + p.dot(r) + 0.5 * c * r.squaredNorm();
    };
    std::mt19937_64 rng(seed);
    std::vector<Vector> pts;
    for (int s = 0; s < 10; ++s) pts.push_back(0.8 * sample_point(pb.composite().h.set, rng));
    const double err =
        finite_diff_grad_check(smooth_part, [&](const Vector& z) { return smooth_grad(pb, z, p, c); }, pts);
    EXPECT_LE(err, 1e-5);
  }
}

TEST(BuildSubproblem, GradientAtCenter) {
  const auto pb = small_generated(2);
  const auto prm = PenaltyParams::make(pb, 2.0, 1.0, 0.7);
  const Vector z_prev = pb.composite().slater_point;
  const Vector p_prev = vec({0.5, 1.0});
  const auto cs = build_subproblem(pb, z_prev, p_prev, prm);
  EXPECT_TRUE(cs.smooth_grad(z_prev).isApprox(prm.lambda * smooth_grad(pb, z_prev, p_prev, 2.0), 1e-13));
  EXPECT_DOUBLE_EQ(cs.M_s, prm.M_s);
  EXPECT_DOUBLE_EQ(cs.mu, 0.5);
}

TEST(BuildSubproblem, CurvatureWithinDeclaredBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pb = small_generated(seed);
    const auto prm = PenaltyParams::make(pb, 7.0, 1.0, 0.7);
    const auto& A = pb.constraint().A;
    const Matrix H = prm.lambda * (pb.smooth().quadratic->Q + 7.0 * A.transpose() * A) +
                     0.5 * Matrix::Identity(pb.n(), pb.n());
    const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues();
    EXPECT_LE(eig.maxCoeff(), prm.M_s * (1.0 + 1e-12));
    EXPECT_GE(eig.minCoeff(), -1e-12);
    // Bregman oracle agrees with the assembled Hessian.
    const auto cs = build_subproblem(pb, Vector::Zero(pb.n()), Vector::Zero(2), prm);
    const Vector x = Vector::LinSpaced(pb.n(), -0.5, 0.5), y = Vector::Constant(pb.n(), 0.1);
    EXPECT_NEAR(cs.smooth_bregman(x, y), 0.5 * (x - y).dot(H * (x - y)), 1e-12);
  }
}

TEST(BuildSubproblem, NonsmoothPartIsStronglyConvex) {
  const auto pb = small_generated(3);
  const auto prm = PenaltyParams::make(pb, 1.0, 1.0, 0.7);
  const Vector z_prev = Vector::Constant(pb.n(), 0.2);
  const auto cs = build_subproblem(pb, z_prev, Vector::Zero(2), prm);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int s = 0; s < 30; ++s) {
    Vector x(pb.n());
    for (int i = 0; i < x.size(); ++i) x[i] = g(rng);
    const double t = 0.3 + s * 0.1;
    const Vector u = cs.nonsmooth_prox(t, x);
    const Vector sub = (x - u) / t;
    for (int k = 0; k < 20; ++k) {
      const Vector v = sample_point(pb.composite().h.set, rng, k % 3 == 0);
      EXPECT_GE(cs.nonsmooth_value(v),
                cs.nonsmooth_value(u) + sub.dot(v - u) + 0.25 * (v - u).squaredNorm() - 1e-10);
    }
  }
}

TEST(Refine, ExactInteriorStationaryPoint) {
  // f = 0.5 z'Qz, A = I, b = 0; the subproblem minimizer solves (lam (Q + c I) + I) z = z_prev - lam p.
  Matrix Q(2, 2);
  Q << -0.5, 0.2, 0.2, 1.0;
  const auto pb = identity_constraint(Q, Vector::Zero(2), 1.0, 2.0);
  const auto prm = PenaltyParams::make(pb, 3.0, 1.0, 0.7);
  const Vector z_prev = vec({1.0, -0.5}), p_prev = vec({0.2, 0.1});
  const Matrix M = prm.lambda * (Q + 3.0 * Matrix::Identity(2, 2)) + Matrix::Identity(2, 2);
  const Vector z_k = M.ldlt().solve(z_prev - prm.lambda * p_prev);
  const auto ref = refine(pb, z_prev, p_prev, z_k, Vector::Zero(2), 0.0, prm);
  EXPECT_TRUE(ref.r.isApprox(z_prev - z_k, 1e-14));
  EXPECT_LT((ref.z_hat - z_k).norm(), 1e-14);
  EXPECT_TRUE(ref.w.isApprox(ref.r / prm.lambda, 1e-12));
  EXPECT_EQ(ref.delta, 0.0);
  EXPECT_TRUE(ref.p.isApprox(p_prev + 3.0 * z_k));
}

TEST(Refine, OneDimensionalFormulas) {
  // lam = 1 and lam L_c + 1 = 2; the penalty is negligible so grad g is the constant 1.
  const auto pb = quadratic_instance(Matrix::Zero(1, 1), vec({1.0}), 0.5, 1.0, box(1, -10, 10), Matrix::Ones(1, 1),
                                     Vector::Zero(1), Vector::Zero(1));
  const auto prm = PenaltyParams::make(pb, 1e-14, 1.0, 0.7071067811865476);
  ASSERT_NEAR(prm.lambda * prm.L_c + 1.0, 2.0, 1e-13);
  const auto ref = refine_unchecked(pb, vec({0.5}), vec({0.0}), vec({0.0}), vec({0.0}), 0.0, prm);
  EXPECT_NEAR(ref.r[0], 0.5, 1e-15);
  EXPECT_NEAR(ref.z_hat[0], -0.25, 1e-12);
  EXPECT_NEAR(ref.w[0], 1.0, 1e-12);
  EXPECT_NEAR(ref.w_hat[0], 1.0, 1e-12);
  EXPECT_EQ(ref.delta, 0.0);
  // With eps = 0 the shift bound forces z_hat = z_k, so these inputs are not an inexact prox solution.
  EXPECT_THROW(refine(pb, vec({0.5}), vec({0.0}), vec({0.0}), vec({0.0}), 0.0, prm), InvariantViolation);
}

TEST(Refine, CertificatesFromAcgOutput) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pb = small_generated(seed);
    const auto prm = PenaltyParams::make(pb, 10.0, 1.0, 0.7071067811865476);
    const Vector z_prev = pb.composite().project(Vector::Constant(pb.n(), 0.4));
    const Vector p_prev = vec({0.3, -0.6});
    const auto cs = build_subproblem(pb, z_prev, p_prev, prm);
    const auto cert = acg_run(cs, z_prev, prm.sigma_c);
    const auto ref = refine(pb, z_prev, p_prev, cert.x, cert.u, cert.eta, prm);
    EXPECT_LE(cert.u.squaredNorm() + 2.0 * cert.eta, prm.sigma_c * prm.sigma_c * ref.r.squaredNorm() * (1 + 1e-12));
    const Vector xi = ref.w - pb.grad_f(cert.x) - pb.constraint().A.transpose() * ref.p;
    const auto sub = eps_subdiff_check(pb.composite().h, cert.x, xi, ref.delta, 200, 50, seed);
    EXPECT_TRUE(sub.passed) << "margin " << sub.worst_margin;
    const double res = inclusion_residual(ref.z_hat, ref.w_hat, ref.p_hat, pb);
    EXPECT_LE(res, 1e-8 * (1.0 + ref.z_hat.norm()));
  }
}
