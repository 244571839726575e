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

#include <gtest/gtest.h>

#include "cfed/oracles.hpp"

namespace cfed {
namespace {

FederationProblem tiny(std::uint64_t seed, double rate_mbps) {
  return oracle::make_problem_for(oracle::tiny_scenario(seed, rate_mbps));
}

PowerAllocation slack_powers(const FederationProblem& p) {
  return solve_power(p, initial_assignment(p), default_lambda(p.coeff), true).power;
}

TEST(AssignmentMilp, VariableCountFormula) {
  ScenarioConfig c;
  c.num_csps = 15;
  const FederationProblem p = oracle::make_problem_for(c);
  PowerAllocation pw{Eigen::MatrixXd::Zero(15, 2)};
  const auto m = build_assignment_milp(p, pw, default_lambda(p.coeff));
  const int K = 24, S = 15, F = 2, E = 5;
  EXPECT_EQ(m.milp.lp.num_vars(), K * F + S * F + E + S * F + K * F);
  EXPECT_EQ(static_cast<int>(m.milp.integer_vars.size()), K * F + S * F + E);
  EXPECT_EQ(m.layout.num_vars(), m.milp.lp.num_vars());
}

TEST(AssignmentMilp, NothingNeededActivatesNothing) {
  FederationProblem p = tiny(1, 20);
  p.sinr_thr.setZero();
  PowerAllocation pw{Eigen::MatrixXd::Zero(4, 2)};
  const auto r = solve_assignment(p, pw, default_lambda(p.coeff));
  ASSERT_EQ(r.milp.status, MilpStatus::optimal);
  EXPECT_EQ(r.assignment.active_csps(), 0);
  EXPECT_EQ(r.assignment.active_ecsps(), 0);
  EXPECT_NEAR(r.milp.objective, 0.0, 1e-9);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(r.assignment.x.row(k).sum(), 1);
}

TEST(AssignmentMilp, SingleLinkActivatesItsCspAndEcsp) {
  const double beta = 1e-7, gamma = 0.9e-7;
  const FederationProblem p = oracle::single_link_problem(beta, gamma, 1.0, 16, 4);
  PowerAllocation pw{Eigen::MatrixXd::Constant(1, 1, 1.05 * oracle::single_link_rho(1.0, p.noise_power_w, 4.0, gamma, beta))};
  const auto r = solve_assignment(p, pw, default_lambda(p.coeff));
  ASSERT_EQ(r.milp.status, MilpStatus::optimal);
  EXPECT_EQ(r.assignment.y(0, 0), 1);
  EXPECT_EQ(r.assignment.z(0), 1);
  EXPECT_NEAR(r.slack_sum, 0.0, 1e-12);
  const auto ex = oracle::enumerate_milp(build_assignment_milp(p, pw, default_lambda(p.coeff)).milp);
  EXPECT_NEAR(r.milp.objective, ex.objective, 1e-9 * std::max(1.0, ex.objective));
}

TEST(AssignmentMilp, EncodeDecodeRoundTrip) {
  const FederationProblem p = tiny(3, 40);
  const PowerAllocation pw = slack_powers(p);
  const auto m = build_assignment_milp(p, pw, default_lambda(p.coeff));
  const Assignment a = initial_assignment(p);
  const Eigen::VectorXd v = encode_assignment(m, a);
  EXPECT_EQ(decode_assignment(m, v), a);
  EXPECT_TRUE(milp_point_feasible(m.milp, v, 1e-9, 1e-9));
}

TEST(AssignmentMilp, RoundingRespectsPilotBudget) {
  const FederationProblem p = tiny(4, 40);
  const auto m = build_assignment_milp(p, slack_powers(p), default_lambda(p.coeff));
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(m.layout.num_vars(), 0.5);
  const auto v = assignment_rounding(m, half, p.ecsp_of_csp);
  ASSERT_TRUE(v.has_value());
  const Assignment a = decode_assignment(m, *v);
  for (int f = 0; f < 2; ++f) EXPECT_LE(a.x.col(f).sum(), p.pilot_len);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(a.x.row(k).sum(), 1);
}

TEST(AssignmentMilp, TinyInstanceMatchesEnumeration) {
  for (int i = 0; i < 2; ++i) {
    const FederationProblem p = tiny(drop_seed(31, static_cast<std::uint64_t>(i)), 40);
    const double lambda = default_lambda(p.coeff);
    const auto m = build_assignment_milp(p, slack_powers(p), lambda);
    ASSERT_EQ(m.milp.integer_vars.size(), 16u);
    const auto a = solve_milp(m.milp);
    const auto b = oracle::enumerate_milp(m.milp, 16);
    ASSERT_EQ(a.has_incumbent, b.feasible);
    EXPECT_NEAR(a.objective, b.objective, 1e-7 * std::max(1.0, std::abs(b.objective)));
  }
}

TEST(AssignmentMilp, RejectsWrongPowerShape) {
  const FederationProblem p = tiny(1, 20);
  PowerAllocation pw{Eigen::MatrixXd::Zero(3, 2)};
  EXPECT_THROW(build_assignment_milp(p, pw, 1.0), ShapeError);
}

}  // namespace
}  // namespace cfed
