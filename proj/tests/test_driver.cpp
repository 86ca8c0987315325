#include <gtest/gtest.h>

#include <cmath>

#include "iapial/constants.hpp"
#include "iapial/driver.hpp"
#include "iapial/errors.hpp"
#include "iapial/verify.hpp"
#include "support.hpp"

using namespace iapial;
using iapial::testing::benchmark_spec;
using iapial::testing::box;
using iapial::testing::quadratic_instance;
using iapial::testing::vec;

namespace {

ConstantInputs hand_inputs() {
  ConstantInputs in;
  in.L_h = 1.0;
  in.grad_bound = 1.0;
  in.D = 1.0;
  in.dbar = 1.0;
  in.sigma_plus = 1.0;
  in.op_norm = 1.0;
  in.m_f = 1.0;  // lambda = 0.5
  in.L_f = 2.0;
  in.nu = 1.0;
  in.sigma = 0.5;
  in.rho_hat = 0.1;
  in.eta_hat = 0.01;
  return in;
}

}  // namespace

TEST(Constants, HandValues) {
  const auto k = compute_constants(hand_inputs());
  EXPECT_NEAR(k.lambda, 0.5, 1e-15);
  EXPECT_NEAR(k.kappa0, 21.0, 1e-12);
  EXPECT_NEAR(k.kappa2, 46.0, 1e-12);
  EXPECT_NEAR(k.kappa1, 338688.0, 1e-6);
  EXPECT_NEAR(k.c_bar, std::max(338688.0 / 0.01, 46.0 / 0.01), 1e-3);
  EXPECT_NEAR(k.C1, 2.0 * 9.0 / 0.75, 1e-12);
  EXPECT_NEAR(k.T1, std::max({1.0, 441.0 / 0.01, 21.0 / 0.01}), 1e-9);
  EXPECT_NEAR(k.T2, 2.0 + k.T1, 1e-9);
  EXPECT_NEAR(k.multiplier_bound(), 21.0, 1e-12);
  EXPECT_FALSE(k.R_star);
}

TEST(Constants, OptimalGapTermNeedsBothBounds) {
  auto in = hand_inputs();
  in.phi_lower = -3.0;
  EXPECT_FALSE(compute_constants(in).R_star);
  in.phi_upper = 2.0;
  EXPECT_NEAR(*compute_constants(in).R_star, 5.0 + 1.0 / 0.5, 1e-14);
}

TEST(Constants, InvalidInputs) {
  auto in = hand_inputs();
  in.sigma = 1.0;
  EXPECT_THROW(compute_constants(in), ArgumentError);
  in = hand_inputs();
  in.dbar = 0.0;
  EXPECT_THROW(compute_constants(in), ArgumentError);
}

TEST(Constants, MonotoneInInputs) {
  const double base = compute_constants(hand_inputs()).kappa0;
  auto in = hand_inputs();
  in.L_h = 2.0;
  EXPECT_GT(compute_constants(in).kappa0, base);
  in = hand_inputs();
  in.grad_bound = 2.0;
  EXPECT_GT(compute_constants(in).kappa0, base);
  in = hand_inputs();
  in.D = 1.5;
  EXPECT_GT(compute_constants(in).kappa0, base);
  in = hand_inputs();
  in.sigma_plus = 2.0;
  EXPECT_LT(compute_constants(in).kappa0, base);
}

TEST(Constants, FromGeneratedInstance) {
  const auto pb = generate(benchmark_spec(0));
  TolerancePair tol;
  const auto k = theoretical_constants(pb, 1.0, 0.7071067811865476, tol);
  EXPECT_NEAR(k.D, pb.composite().diameter(), 1e-15);
  EXPECT_NEAR(k.dbar, pb.composite().slater_distance(), 1e-15);
  ASSERT_TRUE(k.R_star);
  ASSERT_TRUE(k.phi_upper);
  EXPECT_NEAR(*k.phi_upper, pb.phi(pb.composite().slater_point), 1e-15);
  EXPECT_NEAR(k.c_bar, std::max(k.kappa1 / 1e-6, k.kappa2 / 1e-3), 1e-6 * k.c_bar);
  EXPECT_GE(k.kappa0, 0.0);
  EXPECT_GE(k.T2, 0.0);
}

TEST(Constants, OuterBoundFormula) {
  auto in = hand_inputs();
  in.phi_lower = 0.0;
  in.phi_upper = 1.0;
  const auto k = compute_constants(in);
  const double expect = std::ceil(1.0 + 4.0 * 9.0 / (0.75 * 0.5 * 0.01) * (3.0 * 3.0 + 441.0 / (2.0 * 4.0)));
  EXPECT_DOUBLE_EQ(*outer_iteration_bound(k, 1.0, 0.5, 0.1, 4.0), expect);
  EXPECT_FALSE(outer_iteration_bound(compute_constants(hand_inputs()), 1.0, 0.5, 0.1, 4.0));
}

TEST(Constants, CycleCountBound) {
  EXPECT_EQ(cycle_count_bound(100.0, 1000.0), 1);
  EXPECT_EQ(cycle_count_bound(100.0, 100.0), 2);
  EXPECT_EQ(cycle_count_bound(100.0, 12.5), 5);
  EXPECT_EQ(cycle_count_bound(100.0, 1.0), static_cast<int>(std::ceil(std::log2(200.0))) + 1);
}

TEST(DriverConfig, ValidationAndNames) {
  DriverConfig cfg;
  EXPECT_NO_THROW(cfg.check());
  cfg.c1 = 0.0;
  EXPECT_THROW(cfg.check(), ArgumentError);
  EXPECT_EQ(parse_restart_mode("cold"), RestartMode::Cold);
  EXPECT_EQ(parse_restart_mode("warm"), RestartMode::HybridWarm);
  EXPECT_EQ(to_string(RestartMode::HybridWarm), "warm");
  EXPECT_THROW(parse_restart_mode("lukewarm"), ArgumentError);
  EXPECT_EQ(to_string(SolveStatus::CycleCap), "cycle_cap");
}

TEST(Solve, StationaryStartSucceedsImmediately) {
  const auto pb = quadratic_instance(Matrix::Zero(2, 2), Vector::Zero(2), 1.0, 1.0, box(2, -1, 1),
                                     Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2));
  for (double c1 : {1e-6, 1.0, 1e6}) {
    DriverConfig cfg;
    cfg.c1 = c1;
    const auto res = solve(pb, cfg);
    ASSERT_EQ(res.status, SolveStatus::Success);
    EXPECT_EQ(res.cycles.size(), 1u);
    EXPECT_EQ(res.total_outer_iterations(), 1);
  }
}

TEST(Solve, DefaultStartIsProjectionOfOrigin) {
  GeneratorSpec g;
  g.n = 4;
  g.l = 1;
  g.kind = DomainKind::Simplex;
  const auto pb = generate(g);
  EXPECT_EQ(default_start(pb), Vector::Zero(4));
}

TEST(Solve, PenaltyDoublesAndBothModesSucceed) {
  const auto pb = generate(benchmark_spec(5));
  for (auto mode : {RestartMode::Cold, RestartMode::HybridWarm}) {
    DriverConfig cfg;
    cfg.restart = mode;
    const auto res = solve(pb, cfg);
    ASSERT_EQ(res.status, SolveStatus::Success) << to_string(mode);
    ASSERT_TRUE(res.triple);
    EXPECT_TRUE(stationarity_check(pb, res.triple->z_hat, res.triple->w_hat, cfg.tol));
    EXPECT_LE(inclusion_residual(res.triple->z_hat, res.triple->w_hat, res.triple->p_hat, pb), 1e-8);
    EXPECT_LE(static_cast<int>(res.cycles.size()), res.cycle_bound);
    for (std::size_t i = 0; i < res.cycles.size(); ++i) {
      EXPECT_DOUBLE_EQ(res.cycles[i].history.c, std::ldexp(cfg.c1, static_cast<int>(i)));
      const bool last = i + 1 == res.cycles.size();
      EXPECT_EQ(res.cycles[i].status, last ? CycleStatus::Success : CycleStatus::SmallPenalty);
      const auto& fin = res.cycles[i].history.records.back();
      EXPECT_LE(fin.feas_hat, res.constants.kappa2 / res.cycles[i].history.c * (1 + 1e-8));
    }
  }
}

TEST(Solve, RestartPointsAndMultiplierReset) {
  const auto pb = generate(benchmark_spec(6));
  const Vector z0 = default_start(pb);
  for (auto mode : {RestartMode::Cold, RestartMode::HybridWarm}) {
    DriverConfig cfg;
    cfg.restart = mode;
    cfg.max_cycles = 2;
    const auto res = solve(pb, cfg, z0);
    ASSERT_EQ(res.cycles.size(), 2u);
    const Vector start = mode == RestartMode::Cold ? z0 : res.cycles[0].last_z;
    const double c2 = res.cycles[1].history.c;
    EXPECT_DOUBLE_EQ(res.cycles[1].history.records.front().lagrangian_prev,
                     lagrangian_value(pb, start, Vector::Zero(pb.l()), c2));
  }
}

TEST(Solve, CycleCapReturnsStatus) {
  const auto pb = generate(benchmark_spec(7));
  DriverConfig cfg;
  cfg.max_cycles = 1;
  const auto res = solve(pb, cfg);
  EXPECT_EQ(res.status, SolveStatus::CycleCap);
  EXPECT_FALSE(res.triple);
  EXPECT_EQ(res.cycles.size(), 1u);
}

TEST(Solve, LargeInitialPenaltyUsesOneCycle) {
  const auto pb = generate(benchmark_spec(8));
  DriverConfig cfg;
  cfg.c1 = theoretical_constants(pb, cfg.nu, cfg.sigma, cfg.tol).c_bar;
  const auto res = solve(pb, cfg);
  ASSERT_EQ(res.status, SolveStatus::Success);
  EXPECT_EQ(res.cycles.size(), 1u);
}

TEST(Solve, EighthOfThresholdNeedsAtMostFourCycles) {
  const auto pb = generate(benchmark_spec(9));
  DriverConfig cfg;
  cfg.c1 = theoretical_constants(pb, cfg.nu, cfg.sigma, cfg.tol).c_bar / 8.0;
  const auto res = solve(pb, cfg);
  ASSERT_EQ(res.status, SolveStatus::Success);
  EXPECT_LE(res.cycles.size(), 4u);
}
