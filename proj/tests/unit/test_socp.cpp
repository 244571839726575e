// Copyright 2026 The cfed Authors
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
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cfed/socp.hpp"

namespace cfed {
namespace {

SocpInstance boxed(int n, double lo, double hi) {
  SocpInstance s;
  s.objective = Eigen::VectorXd::Zero(n);
  s.lower = Eigen::VectorXd::Constant(n, lo);
  s.upper = Eigen::VectorXd::Constant(n, hi);
  s.ineq_A.resize(0, n);
  s.ineq_b.resize(0);
  return s;
}

TEST(SolveSocp, LinearObjectiveOverBall) {
  // min c'x s.t. ||x|| <= 1: x = -c / ||c||.
  SocpInstance s = boxed(3, -5, 5);
  s.objective << 1.0, -2.0, 2.0;
  s.cones.push_back({Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), 1.0});
  const auto r = solve_socp(s);
  ASSERT_EQ(r.status, SocpStatus::optimal);
  EXPECT_NEAR(r.objective, -3.0, 1e-7);
  EXPECT_NEAR(r.values(1), 2.0 / 3.0, 1e-5);  // argmin error scales with the square root of the gap
}

TEST(SolveSocp, DistanceFromPointToBox) {
  // min t s.t. ||x - a|| <= t, x in [0, 1]^2, a = (2, 3): t = sqrt(1 + 4).
  SocpInstance s = boxed(3, -10, 10);
  s.lower.head(2).setZero();
  s.upper.head(2).setOnes();
  s.objective << 0, 0, 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 3);
  A(0, 0) = A(1, 1) = 1;
  Eigen::VectorXd c(3);
  c << 0, 0, 1;
  s.cones.push_back({A, Eigen::Vector2d(-2, -3), c, 0.0});
  const auto r = solve_socp(s);
  ASSERT_EQ(r.status, SocpStatus::optimal);
  EXPECT_NEAR(r.objective, std::sqrt(5.0), 1e-7);
  EXPECT_NEAR(r.values(0), 1.0, 1e-6);
  EXPECT_NEAR(r.values(1), 1.0, 1e-6);
}

TEST(SolveSocp, LinearInequalitiesOnly) {
  // min -x - y s.t. x + 2y <= 4, 3x + y <= 6 on [0, 10]^2: vertex (1.6, 1.2).
  SocpInstance s = boxed(2, 0, 10);
  s.objective << -1, -1;
  s.ineq_A.resize(2, 2);
  s.ineq_A << 1, 2, 3, 1;
  s.ineq_b = Eigen::Vector2d(4, 6);
  const auto r = solve_socp(s);
  ASSERT_EQ(r.status, SocpStatus::optimal);
  EXPECT_NEAR(r.objective, -2.8, 1e-7);
}

TEST(SolveSocp, DetectsInfeasibleCone) {
  // ||x|| <= x0 - 5 with x0 <= 1 cannot hold.
  SocpInstance s = boxed(2, -1, 1);
  s.objective << 1, 0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 2);
  A(0, 1) = 1;
  Eigen::VectorXd c(2);
  c << 1, 0;
  s.cones.push_back({A, Eigen::VectorXd::Zero(1), c, -5.0});
  EXPECT_EQ(solve_socp(s).status, SocpStatus::infeasible);
}

TEST(SolveSocp, RejectsInconsistentShapes) {
  SocpInstance s = boxed(2, 0, 1);
  s.cones.push_back({Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), 1.0});
  EXPECT_THROW(solve_socp(s), ShapeError);
  SocpInstance t = boxed(2, 0, 1);
  t.upper(0) = -1;
  EXPECT_THROW(solve_socp(t), ShapeError);
}

// Random feasible instances: the returned point satisfies every constraint
// and no sampled feasible point has a lower objective.
TEST(SolveSocp, RandomInstancesBeatSampledFeasiblePoints) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    SocpInstance s = boxed(n, -2, 2);
    for (int j = 0; j < n; ++j) s.objective(j) = g(rng);
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = 0.5 * u(rng);
    for (int k = 0; k < 3; ++k) {
      ConeConstraint cc;
      cc.A = Eigen::MatrixXd::NullaryExpr(3, n, [&] { return g(rng); });
      cc.b = Eigen::VectorXd::NullaryExpr(3, [&] { return g(rng); });
      cc.c = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
      cc.d = (cc.A * x0 + cc.b).norm() - cc.c.dot(x0) + 0.5;  // x0 strictly feasible
      s.cones.push_back(cc);
    }
    const auto r = solve_socp(s);
    ASSERT_EQ(r.status, SocpStatus::optimal);
    for (const auto& cc : s.cones) EXPECT_LE((cc.A * r.values + cc.b).norm(), cc.c.dot(r.values) + cc.d + 1e-7);
    for (int j = 0; j < n; ++j) {
      EXPECT_GE(r.values(j), -2 - 1e-8);
      EXPECT_LE(r.values(j), 2 + 1e-8);
    }
    for (int m = 0; m < 2000; ++m) {
      Eigen::VectorXd v = x0 + 0.3 * Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
      bool ok = (v.array() >= -2).all() && (v.array() <= 2).all();
      for (const auto& cc : s.cones) ok = ok && (cc.A * v + cc.b).norm() <= cc.c.dot(v) + cc.d;
      if (ok) EXPECT_GE(s.objective.dot(v), r.objective - 1e-7);
    }
  }
}

TEST(SocpText, RoundTripIsExact) {
  SocpInstance s = boxed(2, -1, 3);
  s.objective << 0.1, 1.0 / 3.0;
  s.cones.push_back({Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0.2, -0.7), Eigen::Vector2d(1, 0), 2.0});
  s.ineq_A.resize(1, 2);
  s.ineq_A << 1, 1;
  s.ineq_b = Eigen::VectorXd::Constant(1, 2.5);
  std::stringstream ss;
  write_socp_text(ss, s);
  const SocpInstance t = read_socp_text(ss);
  EXPECT_EQ(t.objective, s.objective);
  EXPECT_EQ(t.lower, s.lower);
  EXPECT_EQ(t.ineq_A, s.ineq_A);
  ASSERT_EQ(t.cones.size(), 1u);
  EXPECT_EQ(t.cones[0].b, s.cones[0].b);
  EXPECT_EQ(t.cones[0].d, s.cones[0].d);
  EXPECT_NEAR(solve_socp(t).objective, solve_socp(s).objective, 1e-12);
}

}  // namespace
}  // namespace cfed
