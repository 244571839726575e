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

FederationProblem small_problem(double rate_mbps, int federations = 2, std::uint64_t seed = 1) {
  ScenarioConfig c;
  c.num_csps = 15;
  c.antennas_per_csp = 32;
  c.num_federations = federations;
  c.rate_thr_bps = rate_mbps * 1e6;
  c.seed = seed;
  return oracle::make_problem_for(c);
}

TEST(InitialAssignment, SingleFederationTakesEverything) {
  const FederationProblem p = small_problem(20, 1);
  const Assignment a = initial_assignment(p);
  EXPECT_EQ(a.x.col(0).sum(), 24);
  EXPECT_EQ(a.y.col(0).sum(), 15);
  EXPECT_EQ(a.active_ecsps(), 5);
}

TEST(InitialAssignment, TwoFederationsSplitEvenly) {
  const FederationProblem p = small_problem(20, 2);
  const Assignment a = initial_assignment(p);
  EXPECT_EQ(a.x.col(0).sum(), 12);
  EXPECT_EQ(a.x.col(1).sum(), 12);
  EXPECT_EQ(a.y.sum(), 15);
  for (int s = 0; s < 15; ++s) EXPECT_EQ(a.y.row(s).sum(), 1);
}

TEST(Alternation, ZeroThresholdActivatesNothing) {
  FederationProblem p = small_problem(20);
  p.sinr_thr.setZero();
  const FederationSolution s = solve(p, SolveOptions{});
  ASSERT_TRUE(s.success);
  EXPECT_EQ(s.assignment.active_csps(), 0);
  EXPECT_EQ(s.assignment.active_ecsps(), 0);
  EXPECT_DOUBLE_EQ(s.objective_j, 0.0);
}

TEST(Alternation, PenalizedHistoryDoesNotIncrease) {
  const FederationProblem p = small_problem(40);
  const FederationSolution s = alternate(p, SolveOptions{});
  ASSERT_GE(s.history.size(), 2u);
  for (std::size_t i = 1; i < s.history.size(); ++i) {
    if (s.history[i].step == "repair") continue;
    if (s.history[i - 1].step == "repair") continue;
    // power and assignment steps each minimize over their own block
    EXPECT_LE(s.history[i].penalized_j, s.history[i - 1].penalized_j * (1 + 1e-6) + 1e-12) << "step " << i;
  }
}

TEST(Alternation, FeasibleAtLightLoadAndVerified) {
  const FederationProblem p = small_problem(20);
  const FederationSolution s = solve(p, SolveOptions{});
  ASSERT_TRUE(s.success) << s.failure;
  const SolutionReport r = verify_solution(p, s.assignment, s.power);
  EXPECT_TRUE(r.feasible);
  EXPECT_NEAR(s.objective_j, objective_energy(s.assignment, s.power, p.coeff).total_j, 1e-12);
  EXPECT_NEAR(s.avg_power_w, s.objective_j / p.coeff.block_s, 1e-9 * s.avg_power_w);
}

TEST(Alternation, Deterministic) {
  const FederationProblem p = small_problem(40);
  const FederationSolution a = solve(p, SolveOptions{});
  const FederationSolution b = solve(p, SolveOptions{});
  EXPECT_EQ(a.success, b.success);
  EXPECT_EQ(a.objective_j, b.objective_j);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.method, b.method);
}

TEST(Alternation, ProvablyInfeasibleExitsEarly) {
  ScenarioConfig c;
  c.num_csps = 15;
  c.antennas_per_csp = 8;
  c.rate_thr_bps = 96e6;
  const FederationProblem p = oracle::make_problem_for(c);
  const FederationSolution s = solve(p, SolveOptions{});
  EXPECT_FALSE(s.success);
  EXPECT_TRUE(s.history.empty());
  EXPECT_FALSE(s.failure.empty());
}

TEST(RandomActivation, SameSeedSameResult) {
  const FederationProblem p = small_problem(40);
  auto r1 = child_stream(7, Stream::solver);
  auto r2 = child_stream(7, Stream::solver);
  const FederationSolution a = random_activation(p, r1, 10);
  const FederationSolution b = random_activation(p, r2, 10);
  EXPECT_EQ(a.success, b.success);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.method, Method::random);
}

TEST(Solve, NoWorseThanEitherPath) {
  const FederationProblem p = small_problem(40);
  SolveOptions opt;
  const FederationSolution alt = alternate(p, opt);
  auto rng = child_stream(opt.seed, Stream::solver);
  const FederationSolution rnd = random_activation(p, rng, opt.random_trials, opt.socp);
  const FederationSolution s = solve(p, opt);
  ASSERT_TRUE(s.success);
  if (alt.success) EXPECT_LE(s.objective_j, alt.objective_j);
  if (rnd.success) EXPECT_LE(s.objective_j, rnd.objective_j);
  if (alt.success && rnd.success && rnd.objective_j < alt.objective_j) EXPECT_EQ(s.method, Method::refined);
}

TEST(Solve, TinyInstancesAgreeWithJointEnumeration) {
  for (int i = 0; i < 4; ++i) {
    const FederationProblem p =
        oracle::make_problem_for(oracle::tiny_scenario(drop_seed(5, static_cast<std::uint64_t>(i)), oracle::tiny_rate_mbps(i)));
    const FederationSolution s = solve(p, SolveOptions{});
    const oracle::JointResult j = oracle::joint_enumeration(p);
    if (!j.feasible) {
      EXPECT_FALSE(s.success) << "seed " << i;
      continue;
    }
    ASSERT_TRUE(s.success) << "seed " << i << ": " << s.failure;
    EXPECT_GE(s.objective_j, j.objective_j * (1 - 1e-6)) << "seed " << i;
    EXPECT_LE(s.objective_j, 1.5 * j.objective_j) << "seed " << i;
  }
}

TEST(SolveOptions, RejectsBadValues) {
  SolveOptions o;
  o.max_outer_iters = 0;
  EXPECT_THROW(o.validate(), ConfigError);
  o = {};
  o.lambda = -1;
  EXPECT_THROW(o.validate(), ConfigError);
}

}  // namespace
}  // namespace cfed
