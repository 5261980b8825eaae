// Copyright 2026 The hybridrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hybridrl/envs.hpp"
#include "hybridrl/errors.hpp"
#include "test_support.hpp"

namespace hybridrl::envs {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr EnvKind kAllKinds[] = {EnvKind::Pendulum, EnvKind::CartPole, EnvKind::MountainCar};

// Gym form of the pendulum: uniform rod of length 2l pivoting at one end.
Eigen::Vector2d gym_pendulum(const Eigen::Vector2d& x, double u) {
  return {x[1], 15.0 * std::sin(x[0]) - 3.0 * u};
}

Eigen::Vector2d fine_rk4(Eigen::Vector2d x, double u, double duration, double h) {
  const int steps = static_cast<int>(std::lround(duration / h));
  for (int i = 0; i < steps; ++i) {
    const Eigen::Vector2d k1 = gym_pendulum(x, u);
    const Eigen::Vector2d k2 = gym_pendulum(x + 0.5 * h * k1, u);
    const Eigen::Vector2d k3 = gym_pendulum(x + 0.5 * h * k2, u);
    const Eigen::Vector2d k4 = gym_pendulum(x + h * k3, u);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

TEST(EnvParamsTest, DefaultsAreValid) {
  for (EnvKind k : kAllKinds) EXPECT_NO_THROW(default_params(k).validate());
}

TEST(EnvParamsTest, RejectsNonPositiveValues) {
  auto bad = [](auto mutate) {
    EnvParams p = default_params(EnvKind::CartPole);
    mutate(p);
    return p;
  };
  EXPECT_THROW(bad([](EnvParams& p) { p.m = 0.0; }).validate(), ParameterError);
  EXPECT_THROW(bad([](EnvParams& p) { p.M = -1.0; }).validate(), ParameterError);
  EXPECT_THROW(bad([](EnvParams& p) { p.l = 0.0; }).validate(), ParameterError);
  EXPECT_THROW(bad([](EnvParams& p) { p.g = -9.8; }).validate(), ParameterError);
  EXPECT_THROW(bad([](EnvParams& p) { p.dt = 0.0; }).validate(), ParameterError);
  EXPECT_THROW(bad([](EnvParams& p) { p.u_max = 0.0; }).validate(), ParameterError);
  EXPECT_THROW(bad([](EnvParams& p) { p.horizon = 0; }).validate(), ParameterError);
  EXPECT_NO_THROW(bad([](EnvParams& p) { p.g = 0.0; }).validate());
}

TEST(EnvParamsTest, ParsesNames) {
  EXPECT_EQ(parse_env_kind("cartpole"), EnvKind::CartPole);
  for (EnvKind k : kAllKinds) EXPECT_EQ(parse_env_kind(to_string(k)), k);
  EXPECT_THROW(parse_env_kind("acrobot"), ParameterError);
}

TEST(PendulumTest, MatchesGymEquationOfMotion) {
  const EnvParams p = default_params(EnvKind::Pendulum);
  for (double th : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    for (double u : {-2.0, 0.0, 1.5}) {
      const Eigen::Vector2d x{th, 0.4};
      const Eigen::VectorXd got = derivative(p, x, u);
      const Eigen::Vector2d want = gym_pendulum(x, u);
      EXPECT_NEAR(got[0], want[0], 1e-12);
      EXPECT_NEAR(got[1], want[1], 1e-12);
    }
  }
}

TEST(PendulumTest, EquilibriaAreFixedPoints) {
  const EnvParams p = default_params(EnvKind::Pendulum);
  const StateVec up = step(StateVec{0.0, 0.0}, 0.0, p);
  EXPECT_EQ(up[0], 0.0);
  EXPECT_EQ(up[1], 0.0);
  const StateVec down = step(StateVec{kPi, 0.0}, 0.0, p);
  EXPECT_NEAR(std::abs(down[0]), kPi, 1e-12);
  EXPECT_NEAR(down[1], 0.0, 1e-12);
}

TEST(PendulumTest, StepAgreesWithFineIntegrator) {
  const EnvParams p = default_params(EnvKind::Pendulum);
  const StateVec next = step(StateVec{0.1, 0.0}, 0.0, p);
  const Eigen::Vector2d oracle = fine_rk4({0.1, 0.0}, 0.0, p.dt, 1e-5);
  EXPECT_NEAR(next[0], oracle[0], 1e-6);
  EXPECT_NEAR(next[1], oracle[1], 1e-6);

  // One RK4 step of a fast swing carries a local error near (h w)^5 / 120.
  const StateVec pushed = step(StateVec{-0.4, 1.0}, 1.3, p);
  const Eigen::Vector2d oracle2 = fine_rk4({-0.4, 1.0}, 1.3, p.dt, 1e-5);
  EXPECT_NEAR(pushed[0], oracle2[0], 2e-5);
  EXPECT_NEAR(pushed[1], oracle2[1], 2e-5);
}

TEST(PendulumTest, LocalErrorIsFifthOrder) {
  EnvParams p = default_params(EnvKind::Pendulum);
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const StateVec got = step(StateVec{-0.4, 1.0}, 1.3, p);
    const Eigen::Vector2d want = fine_rk4({-0.4, 1.0}, 1.3, p.dt, 1e-6);
    err[k] = (got.vec() - want).norm();
    p.dt /= 2.0;
  }
  EXPECT_GT(err[0] / err[1], 24.0);
  EXPECT_LT(err[0] / err[1], 40.0);
}

TEST(PendulumTest, UnforcedSwingConservesEnergy) {
  const EnvParams p = default_params(EnvKind::Pendulum);
  // Swing of 0.1 rad about the hanging position.
  StateVec s{kPi - 0.1, 0.0};
  const double e0 = mechanical_energy(p, s);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    s = step(s, 0.0, p);
    worst = std::max(worst, std::abs(mechanical_energy(p, s) - e0) / std::abs(e0));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(EnvTest, StepClipsControl) {
  for (EnvKind k : kAllKinds) {
    const EnvParams p = default_params(k);
    const StateVec s = wrap(k, StateVec(Eigen::VectorXd::Constant(state_dim(k), 0.2)));
    EXPECT_EQ(step(s, 100.0 * p.u_max, p), step(s, p.u_max, p));
    EXPECT_EQ(step(s, -100.0 * p.u_max, p), step(s, -p.u_max, p));
    EXPECT_EQ(clip_control(0.5 * p.u_max, p), 0.5 * p.u_max);
  }
}

TEST(EnvTest, StepIsBitDeterministic) {
  for (EnvKind k : kAllKinds) {
    const EnvParams p = default_params(k);
    StateVec a = initial_state(k), b = initial_state(k);
    for (int t = 0; t < 50; ++t) {
      a = step(a, 0.3 * std::sin(t), p);
      b = step(b, 0.3 * std::sin(t), p);
    }
    EXPECT_EQ(a, b);
  }
}

TEST(EnvTest, NonFiniteInputsSignalDivergence) {
  const EnvParams p = default_params(EnvKind::CartPole);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(step(StateVec{0, 0, nan, 0}, 0.0, p), DivergenceError);
  EXPECT_THROW(advance(StateVec{0, 0, 0, 0}, nan, p), DivergenceError);
}

TEST(EnvTest, AnglesStayWrapped) {
  const EnvParams p = default_params(EnvKind::Pendulum);
  StateVec s{kPi - 0.01, 8.0};
  for (int t = 0; t < 100; ++t) {
    s = step(s, 2.0, p);
    EXPECT_GT(s[0], -kPi);
    EXPECT_LE(s[0], kPi);
  }
  EXPECT_EQ(wrap_angle(kPi), kPi);
  EXPECT_EQ(wrap_angle(-kPi), kPi);
}

TEST(ObserveTest, PublishedTargetsAndStarts) {
  EXPECT_EQ(observe(EnvKind::Pendulum, StateVec{0.0, 0.0}), (ObsVec{1.0, 0.0, 0.0}));
  const ObsVec hanging = observe(EnvKind::Pendulum, StateVec{kPi, 0.0});
  EXPECT_EQ(hanging[0], -1.0);
  EXPECT_NEAR(hanging[1], 0.0, 1e-15);
  EXPECT_EQ(hanging[2], 0.0);
  EXPECT_EQ(observe(EnvKind::CartPole, StateVec{0, 0, 0, 0}), (ObsVec{0, 0, 1, 0, 0}));
  EXPECT_EQ(observe(EnvKind::MountainCar, StateVec{0.3, -0.2}), (ObsVec{0.3, -0.2}));
}

TEST(ObserveTest, TrigEmbeddingIsUnitNormAndInvertible) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double th = angle(rng);
    const ObsVec o = observe(EnvKind::CartPole, StateVec{0.1, 0.2, th, 0.3});
    EXPECT_NEAR(o[2] * o[2] + o[3] * o[3], 1.0, 1e-12);
    EXPECT_NEAR(std::atan2(o[3], o[2]), wrap_angle(th), 1e-12);
  }
}

TEST(ObserveTest, PeriodicInTheta) {
  // Dyadic angles keep theta + 2 pi reducible without rounding.
  for (int k = -64; k <= 64; ++k) {
    const double th = k / 16.0;
    EXPECT_EQ(observe(EnvKind::Pendulum, StateVec{th, 0.5}),
              observe(EnvKind::Pendulum, StateVec{th + 2.0 * kPi, 0.5}))
        << "theta = " << th;
  }
}

TEST(RewardTest, ZeroAtTargetAndNonPositive) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (EnvKind k : kAllKinds) {
    const CostSpec c = default_cost(k);
    EXPECT_EQ(reward(c.target, 0.0, c), 0.0);
    for (int i = 0; i < 200; ++i) {
      Eigen::VectorXd x(c.target.size());
      for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = unit(rng);
      const double u = unit(rng);
      EXPECT_LE(reward(ObsVec(x), u, c), 0.0);
      EXPECT_LE(reward(ObsVec(x), u, c), reward(ObsVec(x), 0.0, c));
    }
  }
}

TEST(RewardTest, QuadraticFormByHand) {
  const CostSpec c = default_cost(EnvKind::Pendulum);
  const ObsVec hanging{-1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(reward(hanging, 0.0, c), -4.0 * c.weights[0]);
  EXPECT_DOUBLE_EQ(reward(hanging, 2.0, c), -4.0 * c.weights[0] - 4.0 * c.control_weight);
}

TEST(RewardTest, DimensionMismatchThrows) {
  const CostSpec c = default_cost(EnvKind::Pendulum);
  EXPECT_THROW(reward(ObsVec{1.0, 0.0}, 0.0, c), ParameterError);
}

class LinearizationTest : public ::testing::TestWithParam<EnvKind> {};

TEST_P(LinearizationTest, NumericalMatchesAnalyticModel) {
  const EnvParams p = default_params(GetParam());
  const Linearization num = linearize_numerical(p, operating_state(GetParam()), 0.0);
  EXPECT_TRUE(num.at_equilibrium);
  const LinearSystem an = analytic_linearization(p);
  for (const auto& [a, n] : {std::pair{an.A, num.system.A}, std::pair{an.B, num.system.B}}) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (a(i, j) == 0.0) {
          EXPECT_NEAR(n(i, j), 0.0, 1e-6) << "(" << i << "," << j << ")";
        } else {
          EXPECT_NEAR(n(i, j), a(i, j), 1e-3 * std::abs(a(i, j))) << "(" << i << "," << j << ")";
        }
      }
    }
  }
}

TEST_P(LinearizationTest, AnalyticModelTracksParameterChanges) {
  EnvParams p = default_params(GetParam());
  p.m *= 2.5;
  p.M *= 0.7;
  p.g *= 1.9;
  const Linearization num = linearize_numerical(p, operating_state(GetParam()), 0.0);
  const LinearSystem an = analytic_linearization(p);
  EXPECT_LT((num.system.A - an.A).cwiseAbs().maxCoeff(), 1e-5 * (1.0 + an.A.cwiseAbs().maxCoeff()));
  EXPECT_LT((num.system.B - an.B).cwiseAbs().maxCoeff(), 1e-5 * (1.0 + an.B.cwiseAbs().maxCoeff()));
}

INSTANTIATE_TEST_SUITE_P(AllEnvs, LinearizationTest,
                         ::testing::Values(EnvKind::Pendulum, EnvKind::CartPole,
                                           EnvKind::MountainCar));

TEST(LinearizationTest, PendulumAndMountainCarMatchPublishedBlocks) {
  for (EnvKind k : {EnvKind::Pendulum, EnvKind::MountainCar}) {
    const EnvParams p = default_params(k);
    const LinearSystem ref = testing::reference_model(p);
    const Linearization num = linearize_numerical(p, operating_state(k), 0.0);
    EXPECT_LT((num.system.A - ref.A).cwiseAbs().maxCoeff(), 1e-3 * ref.A.cwiseAbs().maxCoeff());
    EXPECT_LT((num.system.B - ref.B).cwiseAbs().maxCoeff(), 1e-3 * ref.B.cwiseAbs().maxCoeff());
  }
}

TEST(LinearizationTest, CartPolePublishedBlockHasInconsistentSign) {
  // The product A(1,2) B(1) B(3) does not depend on the sign conventions for
  // x, theta or u. For a rigid pole on a cart it is positive: pushing the
  // cart one way swings the pole the other, while gravity on a tilted pole
  // pushes the cart away from the lean. The published block makes it
  // negative, so no consistent choice of conventions reproduces every entry.
  const EnvParams p = default_params(EnvKind::CartPole);
  const LinearSystem ref = testing::reference_model(p);
  const Linearization num = linearize_numerical(p, operating_state(EnvKind::CartPole), 0.0);
  const double published = ref.A(1, 2) * ref.B(1, 0) * ref.B(3, 0);
  const double simulated = num.system.A(1, 2) * num.system.B(1, 0) * num.system.B(3, 0);
  EXPECT_LT(published, 0.0);
  EXPECT_GT(simulated, 0.0);
  // Every other entry agrees.
  Eigen::MatrixXd dA = num.system.A - ref.A;
  dA(1, 2) = 0.0;
  EXPECT_LT(dA.cwiseAbs().maxCoeff(), 1e-3 * ref.A.cwiseAbs().maxCoeff());
  EXPECT_LT((num.system.B - ref.B).cwiseAbs().maxCoeff(), 1e-3 * ref.B.cwiseAbs().maxCoeff());
}

TEST(LinearizationTest, FlagsNonEquilibrium) {
  const EnvParams p = default_params(EnvKind::Pendulum);
  const Linearization lin = linearize_numerical(p, StateVec{0.5, 0.0}, 0.0);
  EXPECT_FALSE(lin.at_equilibrium);
  EXPECT_GT(lin.equilibrium_residual, 1.0);
}

TEST(ObservationMapTest, EveryStateAppearsOnce) {
  for (EnvKind k : kAllKinds) {
    const ObservationMap map = observation_map(k);
    ASSERT_EQ(static_cast<Eigen::Index>(map.state_index.size()), obs_dim(k));
    std::vector<int> hits(static_cast<std::size_t>(state_dim(k)), 0);
    for (const auto& idx : map.state_index) {
      if (idx) ++hits[static_cast<std::size_t>(*idx)];
    }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

}  // namespace
}  // namespace hybridrl::envs
