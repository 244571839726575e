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
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "cfed/oracles.hpp"

namespace cfed {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpInstance one_var(double lo, double hi) {
  LpInstance lp;
  lp.cost = Eigen::VectorXd::Ones(1);
  lp.A.resize(0, 1);
  lp.rhs.resize(0);
  lp.lower = Eigen::VectorXd::Constant(1, lo);
  lp.upper = Eigen::VectorXd::Constant(1, hi);
  return lp;
}

void add_row(LpInstance& lp, const std::vector<double>& a, RowSense s, double b) {
  const Eigen::Index m = lp.A.rows();
  lp.A.conservativeResize(m + 1, lp.cost.size());
  for (std::size_t j = 0; j < a.size(); ++j) lp.A(m, static_cast<Eigen::Index>(j)) = a[j];
  lp.rhs.conservativeResize(m + 1);
  lp.rhs(m) = b;
  lp.sense.push_back(s);
}

TEST(SolveLp, BoundedBelowByRow) {
  LpInstance lp = one_var(-kInf, kInf);
  add_row(lp, {1.0}, RowSense::ge, 1.0);
  add_row(lp, {1.0}, RowSense::le, 2.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.values(0), 1.0, 1e-12);
}

TEST(SolveLp, ContradictoryRowsAreInfeasible) {
  LpInstance lp = one_var(-kInf, kInf);
  add_row(lp, {1.0}, RowSense::le, 0.0);
  add_row(lp, {1.0}, RowSense::ge, 1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::infeasible);
}

TEST(SolveLp, DetectsUnbounded) {
  LpInstance lp = one_var(-kInf, kInf);
  add_row(lp, {1.0}, RowSense::le, 3.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::unbounded);
}

TEST(SolveLp, EqualityAndFreeVariables) {
  // min x + 2y s.t. x + y = 3, x - y <= 1, y free, x >= 0: (2, 1), value 4.
  LpInstance lp;
  lp.cost = Eigen::Vector2d(1, 2);
  lp.A.resize(0, 2);
  lp.rhs.resize(0);
  lp.lower = Eigen::Vector2d(0, -kInf);
  lp.upper = Eigen::Vector2d(kInf, kInf);
  add_row(lp, {1, 1}, RowSense::eq, 3);
  add_row(lp, {1, -1}, RowSense::le, 1);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective, 4.0, 1e-10);
}

TEST(SolveLp, RandomMatchesTableauOracle) {
  auto rng = child_stream(77, Stream::monte_carlo);
  for (int i = 0; i < 40; ++i) {
    const LpInstance lp = oracle::random_lp(rng, 20, 40);
    const auto a = solve_lp(lp);
    const auto b = oracle::tableau_simplex(lp);
    ASSERT_EQ(a.status, b.status) << "case " << i;
    if (a.status == LpStatus::optimal) EXPECT_NEAR(a.objective, b.objective, 1e-8 * std::max(1.0, std::abs(b.objective)));
  }
}

TEST(SolveLp, RejectsBadShapes) {
  LpInstance lp = one_var(0, 1);
  lp.lower(0) = 2;
  EXPECT_THROW(solve_lp(lp), ShapeError);
}

MilpInstance knapsack() {
  // min -(3a + 4b + 5c + 4d) s.t. 2a + 3b + 4c + 5d <= 9.
  MilpInstance in;
  in.lp.cost = Eigen::Vector4d(-3, -4, -5, -4);
  in.lp.A = Eigen::RowVector4d(2, 3, 4, 5);
  in.lp.sense = {RowSense::le};
  in.lp.rhs = Eigen::VectorXd::Constant(1, 9);
  in.lp.lower = Eigen::Vector4d::Zero();
  in.lp.upper = Eigen::Vector4d::Ones();
  in.integer_vars = {0, 1, 2, 3};
  return in;
}

TEST(SolveMilp, KnapsackMatchesEnumeration) {
  const auto in = knapsack();
  const auto ex = oracle::enumerate_milp(in);
  EXPECT_EQ(ex.leaves, 16);
  EXPECT_DOUBLE_EQ(ex.objective, -12.0);  // {a, b, c}
  const auto s = solve_milp(in);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_DOUBLE_EQ(s.objective, ex.objective);
  EXPECT_EQ(s.values, Eigen::Vector4d(1, 1, 1, 0));
}

TEST(SolveMilp, IntegralRelaxationTakesOneNode) {
  MilpInstance in = knapsack();
  in.lp.rhs(0) = 14;  // everything fits
  const auto s = solve_milp(in);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_EQ(s.nodes_explored, 1);
  EXPECT_DOUBLE_EQ(s.objective, -16.0);
}

TEST(SolveMilp, InfeasibleInstance) {
  MilpInstance in = knapsack();
  in.lp.sense[0] = RowSense::ge;
  in.lp.rhs(0) = 15;
  EXPECT_EQ(solve_milp(in).status, MilpStatus::infeasible);
}

TEST(SolveMilp, NodeLimitReported) {
  auto rng = child_stream(5, Stream::monte_carlo);
  MilpOptions opt;
  opt.node_limit = 1;
  int limited = 0;
  for (int i = 0; i < 10; ++i) {
    const auto s = solve_milp(oracle::random_milp(rng, 12), opt);
    EXPECT_LE(s.nodes_explored, 1);
    if (s.status == MilpStatus::node_limit) ++limited;
  }
  EXPECT_GT(limited, 0);
}

TEST(SolveMilp, RandomMatchEnumeration) {
  auto rng = child_stream(9, Stream::monte_carlo);
  for (int i = 0; i < 25; ++i) {
    const auto in = oracle::random_milp(rng, 4 + i % 9);
    const auto a = solve_milp(in);
    const auto b = oracle::enumerate_milp(in, 14);
    ASSERT_EQ(a.has_incumbent, b.feasible);
    if (b.feasible) EXPECT_NEAR(a.objective, b.objective, 1e-7 * std::max(1.0, std::abs(b.objective)));
  }
}

TEST(SolveMilp, IncumbentFallsAndBoundRises) {
  auto rng = child_stream(21, Stream::monte_carlo);
  for (int i = 0; i < 10; ++i) {
    const auto s = solve_milp(oracle::random_milp(rng, 14));
    ASSERT_EQ(s.incumbent_history.size(), s.bound_history.size());
    for (std::size_t t = 1; t < s.incumbent_history.size(); ++t) {
      EXPECT_LE(s.incumbent_history[t], s.incumbent_history[t - 1]);
      EXPECT_GE(s.bound_history[t], s.bound_history[t - 1]);
    }
    if (s.has_incumbent) EXPECT_LE(s.bound, s.objective + 1e-12);
  }
}

TEST(SolveMilp, HeuristicIsOptional) {
  auto rng = child_stream(4, Stream::monte_carlo);
  const auto in = oracle::random_milp(rng, 10);
  const auto a = solve_milp(in);
  const auto b = solve_milp(in, MilpOptions{}, MilpHeuristic{});
  ASSERT_EQ(a.has_incumbent, b.has_incumbent);
  if (a.has_incumbent) EXPECT_NEAR(a.objective, b.objective, 1e-9);
}

TEST(MilpText, RoundTripIsExact) {
  auto rng = child_stream(6, Stream::monte_carlo);
  const auto in = oracle::random_milp(rng, 8);
  std::stringstream ss;
  write_milp_text(ss, in);
  const auto back = read_milp_text(ss);
  EXPECT_EQ(back.lp.A, in.lp.A);
  EXPECT_EQ(back.lp.cost, in.lp.cost);
  EXPECT_EQ(back.lp.rhs, in.lp.rhs);
  EXPECT_EQ(back.lp.sense, in.lp.sense);
  EXPECT_EQ(back.integer_vars, in.integer_vars);
}

TEST(EnumerateMilp, RefusesOversizedInstances) {
  auto rng = child_stream(6, Stream::monte_carlo);
  EXPECT_THROW(oracle::enumerate_milp(oracle::random_milp(rng, 15), 14), Error);
}

}  // namespace
}  // namespace cfed
