#include <gtest/gtest.h>

#include <random>

#include "iapial/errors.hpp"
#include "iapial/prox.hpp"
#include "iapial/verify.hpp"
#include "support.hpp"

using namespace iapial;
using iapial::testing::box;
using iapial::testing::vec;

namespace {

std::vector<Regularizer> five_dim_kinds() {
  return {box(5, -1.0, 2.0),
          {Box{Vector::Constant(5, -1.0), Vector::Constant(5, 1.0)}, 0.4},
          {Ball{vec({0.5, 0, 0, -0.5, 1}), 1.5}, 0.0},
          {Simplex{5, 2.0}, 0.0}};
}

Vector gaussian(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = g(rng);
  return x;
}

}  // namespace

TEST(Prox, BoxInteriorFixedPoint) {
  for (double t : {0.1, 1.0, 50.0}) EXPECT_EQ(prox(box(4, -1, 1), t, Vector::Zero(4)), Vector::Zero(4));
}

TEST(Prox, BoxClamp) { EXPECT_DOUBLE_EQ(prox(box(1, -1, 1), 1.0, vec({3.0}))[0], 1.0); }

TEST(Prox, SimplexVertex) {
  const Vector u = prox({Simplex{2, 1.0}, 0.0}, 1.0, vec({2.0, 0.0}));
  EXPECT_NEAR(u[0], 1.0, 1e-15);
  EXPECT_NEAR(u[1], 0.0, 1e-15);
}

TEST(Prox, SimplexInteriorAndCappedFace) {
  const Regularizer h{Simplex{3, 1.0}, 0.0};
  EXPECT_TRUE(prox(h, 1.0, vec({0.1, 0.2, 0.3})).isApprox(vec({0.1, 0.2, 0.3})));
  EXPECT_TRUE(prox(h, 1.0, vec({-1.0, 0.2, -0.3})).isApprox(vec({0.0, 0.2, 0.0})));
  const Vector u = prox(h, 1.0, vec({1.0, 1.0, 1.0}));
  EXPECT_NEAR(u.sum(), 1.0, 1e-14);
  EXPECT_NEAR(u[0], 1.0 / 3.0, 1e-14);
}

TEST(Prox, BallRadial) {
  const Vector u = prox({Ball{Vector::Zero(2), 1.0}, 0.0}, 2.0, vec({3.0, 4.0}));
  EXPECT_NEAR(u[0], 0.6, 1e-15);
  EXPECT_NEAR(u[1], 0.8, 1e-15);
}

TEST(Prox, L1BoxSoftThresholdThenClamp) {
  const Regularizer h{Box{Vector::Constant(3, -1.0), Vector::Constant(3, 1.0)}, 0.5};
  const Vector u = prox(h, 2.0, vec({3.0, 0.4, -1.5}));
  EXPECT_DOUBLE_EQ(u[0], 1.0);
  EXPECT_DOUBLE_EQ(u[1], 0.0);
  EXPECT_DOUBLE_EQ(u[2], -0.5);
}

TEST(Prox, NonpositiveStepRejected) {
  EXPECT_THROW(prox(box(1, -1, 1), 0.0, vec({0.0})), ArgumentError);
  EXPECT_THROW(prox(box(1, -1, 1), -1.0, vec({0.0})), ArgumentError);
}

TEST(ShiftedProx, ReductionIdentity) {
  const Regularizer h{Ball{Vector::Zero(3), 1.0}, 0.0};
  const Vector c = vec({2.0, -1.0, 0.5});
  EXPECT_TRUE(shifted_prox(h, Vector::Zero(3), 4.0, c).isApprox(prox(h, 0.25, c)));
}

TEST(ShiftedProx, OneDimensionalExamples) {
  EXPECT_NEAR(shifted_prox(box(1, -10, 10), vec({1.0}), 2.0, vec({0.0}))[0], -0.5, 1e-15);
  EXPECT_NEAR(shifted_prox(box(1, 0, 10), vec({1.0}), 2.0, vec({0.0}))[0], 0.0, 1e-15);
}

TEST(ShiftedProx, NonpositiveAlphaRejected) {
  EXPECT_THROW(shifted_prox(box(1, -1, 1), vec({1.0}), 0.0, vec({0.0})), ArgumentError);
  EXPECT_THROW(shifted_prox(box(1, -1, 1), vec({1.0}), -2.0, vec({0.0})), ArgumentError);
}

TEST(BruteForceProx, ReturnsPointsAlreadyInDomain) {
  const Vector x = vec({0.2, -0.4, 0.9});
  EXPECT_LT((brute_force_prox(box(3, -1, 1), 1.0, x) - x).norm(), 1e-8);
  EXPECT_LT((brute_force_prox({Ball{Vector::Zero(3), 2.0}, 0.0}, 1.0, x) - x).norm(), 1e-8);
}

TEST(BruteForceProx, BallRadial) {
  const Vector u = brute_force_prox({Ball{Vector::Zero(2), 1.0}, 0.0}, 1.0, vec({3.0, 4.0}));
  EXPECT_NEAR(u[0], 0.6, 1e-8);
  EXPECT_NEAR(u[1], 0.8, 1e-8);
}

TEST(BruteForceProx, AgreesWithProxOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> tdist(0.1, 3.0);
  for (const auto& h : five_dim_kinds()) {
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const double t = tdist(rng);
      const Vector x = gaussian(5, rng, 2.0);
      const double lib = prox_objective(h, t, x, prox(h, t, x));
      const double ref = prox_objective(h, t, x, brute_force_prox(h, t, x));
      worst = std::max(worst, std::abs(lib - ref));
      EXPECT_LE(lib, ref + 1e-12);
    }
    EXPECT_LE(worst, 1e-6) << kind_name(h);
  }
}

TEST(ProxProperties, OptimalityAgainstSampledPoints) {
  std::mt19937_64 rng(9);
  for (const auto& h : five_dim_kinds()) {
    for (int s = 0; s < 20; ++s) {
      const Vector x = gaussian(5, rng, 2.0);
      const Vector u = prox(h, 0.8, x);
      const double best = prox_objective(h, 0.8, x, u);
      for (int k = 0; k < 50; ++k) {
        const Vector v = sample_point(h.set, rng, k % 5 == 0);
        EXPECT_GE(prox_objective(h, 0.8, x, v), best - 1e-10 * (1.0 + std::abs(value(h, u))));
      }
    }
  }
}

TEST(ProxProperties, Nonexpansive) {
  std::mt19937_64 rng(10);
  for (const auto& h : five_dim_kinds()) {
    for (int s = 0; s < 200; ++s) {
      const Vector x = gaussian(5, rng, 2.0);
      const Vector y = gaussian(5, rng, 2.0);
      EXPECT_LE((prox(h, 1.3, x) - prox(h, 1.3, y)).norm(), (x - y).norm() * (1.0 + 1e-12));
    }
  }
}

TEST(ProxProperties, SubgradientSplitsIntoBoundedPartAndNormal) {
  const double gamma = 0.3;
  const Regularizer h{Box{Vector::Constant(6, -1.0), Vector::Constant(6, 1.0)}, gamma};
  const double t = 0.7;
  std::mt19937_64 rng(12);
  for (int s = 0; s < 30; ++s) {
    const Vector x = gaussian(6, rng, 1.5);
    const Vector u = prox(h, t, x);
    const Vector sub = (x - u) / t;
    // Lipschitz part: the l1 subgradient clipped to [-gamma, gamma]; the rest must be a normal vector.
    const Vector bounded = sub.cwiseMax(-gamma).cwiseMin(gamma);
    const Vector normal = sub - bounded;
    EXPECT_LE(bounded.norm(), lipschitz_constant(h) + 1e-12);
    for (int i = 0; i < 6; ++i) {
      if (normal[i] > 1e-12) EXPECT_DOUBLE_EQ(u[i], 1.0);
      if (normal[i] < -1e-12) EXPECT_DOUBLE_EQ(u[i], -1.0);
    }
    EXPECT_TRUE(eps_subdiff_check({h.set, 0.0}, u, normal, 0.0, 100, 50, s).passed);
    EXPECT_TRUE(eps_subdiff_check(h, u, sub, 0.0, 100, 50, s).passed);
  }
}

TEST(Geometry, BoxBallSimplex) {
  EXPECT_NEAR(diameter(box(4, -1, 1).set), 4.0, 1e-14);
  EXPECT_NEAR(boundary_distance(box(4, -1, 1).set, Vector::Zero(4)), 1.0, 1e-15);
  EXPECT_NEAR(diameter(Ball{Vector::Zero(3), 2.0}), 4.0, 1e-15);
  EXPECT_NEAR(diameter(Simplex{3, 1.0}), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(max_norm(Ball{vec({3.0, 4.0}), 1.0}), 6.0, 1e-14);
  EXPECT_NEAR(minimum_value({Box{vec({0.5, -1.0}), vec({1.0, 1.0})}, 2.0}), 1.0, 1e-15);
}

TEST(Geometry, InvalidSetsRejected) {
  EXPECT_THROW(check_regularizer({Box{vec({1.0}), vec({0.0})}, 0.0}), StructuralError);
  EXPECT_THROW(check_regularizer({Ball{vec({0.0}), 0.0}, 0.0}), StructuralError);
  EXPECT_THROW(check_regularizer({Simplex{2, -1.0}, 0.0}), StructuralError);
}
