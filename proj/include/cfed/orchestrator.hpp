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

#pragma once

// The federation heuristic: alternate between the power cone program and the
// assignment MILP under a fixed penalty, polish the result without slack, and
// compare against random CSP activation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cfed/assignment.hpp"
#include "cfed/conesolve.hpp"
#include "cfed/mipsolve.hpp"
#include "cfed/model.hpp"
#include "cfed/rng.hpp"

namespace cfed {

struct SolveOptions {
  double lambda = 0.0;  // 0 selects default_lambda for the instance
  int max_outer_iters = 20;
  double tol_obj = 1e-4;
  double slack_tol = 1e-6;
  int random_trials = 50;
  std::uint64_t seed = 1;
  SocpOptions socp{};
  MilpOptions milp{};

  void validate(const std::string& path = "solver") const {
    if (!(lambda >= 0)) throw ConfigError(path + ".lambda", "must be > 0, or 0 for the default");
    if (max_outer_iters < 1) throw ConfigError(path + ".max_outer_iters", "must be >= 1");
    if (!(tol_obj > 0)) throw ConfigError(path + ".tol_obj", "must be positive");
    if (!(slack_tol >= 0)) throw ConfigError(path + ".slack_tol", "must be non-negative");
    if (random_trials < 1) throw ConfigError(path + ".random_trials", "must be >= 1");
    if (milp.node_limit < 1) throw ConfigError(path + ".node_limit", "must be >= 1");
  }

  double lambda_for(const FederationProblem& p) const { return lambda > 0 ? lambda : default_lambda(p.coeff); }
};

enum class Method { alternation, random, refined };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::alternation: return "alternation";
    case Method::random: return "random";
    case Method::refined: return "refined";
  }
  return "?";
}

struct IterationRecord {
  int outer = 0;
  std::string step;        // "power" or "assignment"
  double penalized_j = 0;  // objective including the slack penalty
  double slack_sum = 0;
};

struct FederationSolution {
  bool success = false;
  Assignment assignment;
  PowerAllocation power;
  SolutionReport report;
  double objective_j = 0;
  double avg_power_w = 0;
  std::vector<IterationRecord> history;
  Method method = Method::alternation;
  int outer_iters = 0;
  long milp_nodes = 0;
  std::string failure;  // why success is false
};

// Initialization -------------------------------------------------------------

/// UEs sorted by (y, x) and cut into F chunks of near-equal size; every CSP
/// joins the federation with the nearest UE centroid (ties to the lower index).
inline Assignment initial_assignment(const FederationProblem& p) {
  const int K = p.num_ues, F = p.num_federations;
  if (K > static_cast<long>(F) * p.pilot_len) throw StructuralInfeasibility("K exceeds F * tau_p");
  Assignment a = Assignment::zeros(K, p.num_csps, p.num_ecsps, F);
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    const auto& u = p.ue_positions[static_cast<std::size_t>(i)];
    const auto& v = p.ue_positions[static_cast<std::size_t>(j)];
    if (u.y != v.y) return u.y < v.y;
    return u.x < v.x;
  });
  const int base = K / F, extra = K % F;
  int pos = 0;
  for (int f = 0; f < F; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) a.x(order[static_cast<std::size_t>(pos++)], f) = 1;
  }
  for (int s = 0; s < p.num_csps; ++s) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int f = 0; f < F; ++f) {
      const auto ues = a.ues_in(f);
      if (ues.empty()) continue;
      double cx = 0, cy = 0;
      for (int k : ues) {
        cx += p.ue_positions[static_cast<std::size_t>(k)].x;
        cy += p.ue_positions[static_cast<std::size_t>(k)].y;
      }
      cx /= static_cast<double>(ues.size());
      cy /= static_cast<double>(ues.size());
      const auto& c = p.csp_positions[static_cast<std::size_t>(s)];
      const double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy);
      if (d < best_d) {
        best_d = d;
        best = f;
      }
    }
    if (best >= 0) a.y(s, best) = 1;
  }
  a.sync_ecsps(p.ecsp_of_csp);
  return a;
}

// Objective pieces -----------------------------------------------------------

/// Power-cap slack implied by rho and y, in units of rho_unit.
inline double cap_slack(const FederationProblem& p, const Assignment& a, const PowerAllocation& pw) {
  const double u = rho_unit(p);
  double sum = 0.0;
  for (int s = 0; s < p.num_csps; ++s)
    for (int f = 0; f < p.num_federations; ++f) {
      const double r = std::max(0.0, pw.rho(s, f));
      sum += std::max(0.0, r - std::min(r, p.sqrt_pmax()) * a.y(s, f)) / u;
    }
  return sum;
}

/// Static cost of the binaries, PA cost with the per-pair sum of rho and the
/// slack penalty: the quantity both alternation steps minimize.
inline double penalized_objective_j(const FederationProblem& p, const Assignment& a, const PowerAllocation& pw,
                                    double slack_sum, double lambda) {
  return a.active_csps() * p.coeff.csp_static_j + a.active_ecsps() * p.coeff.ecsp_j +
         p.coeff.pa_per_sqrt_w * pw.rho.cwiseMax(0.0).sum() + lambda * slack_sum;
}

namespace detail {

/// Drops active CSPs whose power is negligible next to their federation's
/// strongest CSP, keeping the change only if the slack-free re-solve succeeds.
inline void prune_idle(const FederationProblem& p, Assignment& a, PowerAllocation& pw, const SocpOptions& opt) {
  Assignment b = a;
  bool any = false;
  for (int f = 0; f < p.num_federations; ++f) {
    const double top = pw.rho.col(f).maxCoeff();
    for (int s = 0; s < p.num_csps; ++s)
      if (b.y(s, f) == 1 && pw.rho(s, f) <= 1e-3 * top) {
        b.y(s, f) = 0;
        any = true;
      }
  }
  if (!any) return;
  b.sync_ecsps(p.ecsp_of_csp);
  const PowerResult r = solve_power(p, b, default_lambda(p.coeff), false, opt);
  if (r.status != SocpStatus::optimal) return;
  if (!verify_solution(p, b, r.power).feasible) return;
  if (objective_energy(b, r.power, p.coeff).total_j >= objective_energy(a, pw, p.coeff).total_j) return;
  a = std::move(b);
  pw = r.power;
}

/// Slack-free allocation for fixed binaries; fills `sol` on success.
inline bool finalize(const FederationProblem& p, Assignment a, const SocpOptions& opt, FederationSolution& sol) {
  PowerResult r = solve_power(p, a, default_lambda(p.coeff), false, opt);
  if (r.status != SocpStatus::optimal) {
    sol.failure = std::string("slack-free power allocation ") + to_string(r.status);
    return false;
  }
  PowerAllocation pw = r.power;
  prune_idle(p, a, pw, opt);
  SolutionReport rep = verify_solution(p, a, pw);
  if (!rep.feasible) {
    sol.failure = "verifier rejected the slack-free allocation";
    return false;
  }
  sol.success = true;
  sol.assignment = std::move(a);
  sol.power = std::move(pw);
  sol.objective_j = rep.objective_j;
  sol.avg_power_w = rep.avg_power_w;
  sol.report = std::move(rep);
  sol.failure.clear();
  return true;
}

/// First-improvement descent on the penalized objective over single moves
/// suggested by the slack solve: a CSP carrying penalized power in a
/// federation it is not assigned to moves there (largest power first), and a
/// UE left with SINR slack moves to another federation with pilot room,
/// swaps with a UE of another federation, or pulls a CSP into its own
/// federation (largest slack, then strongest gain first). At most 2 (S + K)
/// candidates are evaluated in total. Runs while the slacks exceed slack_tol.
inline Assignment repair(const FederationProblem& p, Assignment a, const SolveOptions& opt, double lambda,
                         std::vector<IterationRecord>& history, int outer) {
  struct Eval {
    double j = std::numeric_limits<double>::infinity();
    double slack = 0.0;
    PowerResult power;
  };
  auto evaluate = [&](const Assignment& b) {
    Eval e;
    e.power = solve_power(p, b, lambda, true, opt.socp);
    if (e.power.status != SocpStatus::optimal) return e;
    e.slack = e.power.slack_sum + cap_slack(p, b, e.power.power);
    e.j = penalized_objective_j(p, b, e.power.power, e.slack, lambda);
    return e;
  };
  Eval cur = evaluate(a);
  const double u = rho_unit(p);
  long budget = 2L * (p.num_csps + p.num_ues);  // cone solves
  for (int step = 0; step < p.num_csps + p.num_ues && cur.slack >= opt.slack_tol && std::isfinite(cur.j) && budget > 0;
       ++step) {
    struct Move {
      double weight;
      int kind, who, to;  // kind 0: CSP who to federation to; 1: UE who to federation to; 2: swap UEs who, to
    };
    std::vector<Move> moves;
    for (int s = 0; s < p.num_csps; ++s)
      for (int f = 0; f < p.num_federations; ++f)
        if (a.y(s, f) == 0 && cur.power.power.rho(s, f) / u > opt.slack_tol) moves.push_back({cur.power.power.rho(s, f) / u, 0, s, f});
    for (int k = 0; k < p.num_ues; ++k) {
      const int from = a.federation_of_ue(k);
      if (from < 0 || cur.power.slack(k, from) <= opt.slack_tol) continue;
      for (int t = 0; t < p.num_federations; ++t)
        if (t != from && a.x.col(t).sum() < p.pilot_len) moves.push_back({cur.power.slack(k, from), 1, k, t});
      const double bmax = p.beta.row(k).maxCoeff();
      for (int s = 0; s < p.num_csps; ++s)
        if (a.y(s, from) == 0) moves.push_back({cur.power.slack(k, from) * p.beta(k, s) / bmax, 0, s, from});
      for (int k2 = 0; k2 < p.num_ues; ++k2) {
        const int other = a.federation_of_ue(k2);
        if (other >= 0 && other != from) moves.push_back({cur.power.slack(k, from), 2, k, k2});
      }
    }
    std::stable_sort(moves.begin(), moves.end(), [](const Move& l, const Move& r) { return l.weight > r.weight; });
    bool improved = false;
    for (const Move& m : moves) {
      Assignment b = a;
      if (m.kind == 0) {
        b.y.row(m.who).setZero();
        b.y(m.who, m.to) = 1;
        b.sync_ecsps(p.ecsp_of_csp);
      } else if (m.kind == 1) {
        b.x.row(m.who).setZero();
        b.x(m.who, m.to) = 1;
      } else {
        b.x.row(m.who).swap(b.x.row(m.to));
      }
      if (budget-- <= 0) break;
      Eval e = evaluate(b);
      if (e.j < cur.j * (1.0 - 1e-9)) {
        a = std::move(b);
        cur = std::move(e);
        history.push_back({outer, "repair", cur.j, cur.slack});
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return a;
}

inline FederationSolution infeasible_outcome(const FederationProblem& p, std::string why) {
  FederationSolution s;
  s.assignment = Assignment::zeros(p.num_ues, p.num_csps, p.num_ecsps, p.num_federations);
  s.power.rho = Eigen::MatrixXd::Zero(p.num_csps, p.num_federations);
  s.failure = std::move(why);
  return s;
}

}  // namespace detail

// Alternation ----------------------------------------------------------------

inline FederationSolution alternate(const FederationProblem& p, const SolveOptions& opt) {
  opt.validate();
  const double lambda = opt.lambda_for(p);
  FederationSolution sol = detail::infeasible_outcome(p, "");
  if (provably_infeasible(p)) {
    sol.failure = "SINR targets need more CSPs than exist";
    return sol;
  }
  Assignment a = initial_assignment(p);
  double last_cycle = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= opt.max_outer_iters; ++it) {
    const PowerResult pr = solve_power(p, a, lambda, true, opt.socp);
    if (pr.status != SocpStatus::optimal) {
      sol.failure = std::string("power step ") + to_string(pr.status);
      break;
    }
    const double j1 = penalized_objective_j(p, a, pr.power, pr.slack_sum + cap_slack(p, a, pr.power), lambda);
    sol.history.push_back({it, "power", j1, pr.slack_sum});

    const AssignmentResult ar = solve_assignment(p, pr.power, lambda, opt.milp);
    sol.milp_nodes += ar.milp.nodes_explored;
    sol.outer_iters = it;
    if (!ar.milp.has_incumbent) {
      sol.failure = std::string("assignment step ") + to_string(ar.milp.status);
      break;
    }
    const double j2 = ar.milp.objective / kMicroJoulesPerJoule + pr.pa_energy_j;
    sol.history.push_back({it, "assignment", j2, ar.slack_sum});
    const bool changed = !(ar.assignment == a);
    a = ar.assignment;
    if (ar.slack_sum < opt.slack_tol && !changed) break;
    if (std::abs(last_cycle - j2) <= opt.tol_obj * std::abs(j2)) break;
    last_cycle = j2;
  }

  std::vector<IterationRecord> history = std::move(sol.history);
  const int outer = sol.outer_iters;
  if (!history.empty() && history.back().slack_sum >= opt.slack_tol)
    a = detail::repair(p, std::move(a), opt, lambda, history, outer);
  const long nodes = sol.milp_nodes;
  sol = detail::infeasible_outcome(p, sol.failure);
  detail::finalize(p, a, opt.socp, sol);
  sol.history = std::move(history);
  sol.outer_iters = outer;
  sol.milp_nodes = nodes;
  sol.method = Method::alternation;
  return sol;
}

// Random activation -----------------------------------------------------------

/// CSP subset mapped onto the UE groups of initial_assignment by nearest centroid.
inline Assignment activation_assignment(const FederationProblem& p, const Assignment& base,
                                        const std::vector<int>& subset) {
  Assignment a = base;
  a.y.setZero();
  for (int s : subset) {
    const int f = base.federation_of_csp(s);
    if (f >= 0) a.y(s, f) = 1;
  }
  a.sync_ecsps(p.ecsp_of_csp);
  return a;
}

inline FederationSolution random_activation(const FederationProblem& p, Rng& rng, int trials,
                                            const SocpOptions& socp = {}) {
  const Assignment base = initial_assignment(p);
  FederationSolution sol = detail::infeasible_outcome(p, "no CSP subset admits a slack-free allocation");
  sol.method = Method::random;

  std::vector<int> all(static_cast<std::size_t>(p.num_csps));
  std::iota(all.begin(), all.end(), 0);
  if (detail::finalize(p, activation_assignment(p, base, {}), socp, sol)) return sol;
  // Activation sets are nested restrictions of the full set, so an infeasible
  // full set rules out every subset.
  FederationSolution probe;
  if (!detail::finalize(p, activation_assignment(p, base, all), socp, probe)) return sol;

  std::vector<int> idx = all;
  for (int n = 1; n <= p.num_csps; ++n) {
    const int count = n == p.num_csps ? 1 : trials;
    for (int t = 0; t < count; ++t) {
      for (int i = 0; i < n; ++i) {  // partial Fisher-Yates
        std::uniform_int_distribution<int> pick(i, p.num_csps - 1);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
      }
      std::vector<int> subset(idx.begin(), idx.begin() + n);
      std::sort(subset.begin(), subset.end());
      if (detail::finalize(p, activation_assignment(p, base, subset), socp, sol)) return sol;
    }
  }
  return sol;
}

// Full solve -------------------------------------------------------------------

inline FederationSolution solve(const FederationProblem& p, const SolveOptions& opt) {
  FederationSolution alt = alternate(p, opt);
  auto rng = child_stream(opt.seed, Stream::solver);
  FederationSolution rnd = random_activation(p, rng, opt.random_trials, opt.socp);
  if (alt.success && rnd.success) {
    if (rnd.objective_j < alt.objective_j) {
      rnd.method = Method::refined;
      rnd.history = std::move(alt.history);
      rnd.outer_iters = alt.outer_iters;
      rnd.milp_nodes = alt.milp_nodes;
      return rnd;
    }
    return alt;
  }
  if (rnd.success) {
    rnd.history = std::move(alt.history);
    rnd.outer_iters = alt.outer_iters;
    rnd.milp_nodes = alt.milp_nodes;
    return rnd;
  }
  return alt;
}

// JSON --------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const IterationRecord& r) {
  j = nlohmann::json{{"outer", r.outer}, {"step", r.step}, {"penalized_j", r.penalized_j}, {"slack_sum", r.slack_sum}};
}

namespace detail {
template <typename M>
nlohmann::json matrix_json(const M& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}
}  // namespace detail

inline void to_json(nlohmann::json& j, const FederationSolution& s) {
  j = nlohmann::json{{"success", s.success},
                     {"method", to_string(s.method)},
                     {"objective_j", s.objective_j},
                     {"avg_power_w", s.avg_power_w},
                     {"outer_iters", s.outer_iters},
                     {"milp_nodes", s.milp_nodes},
                     {"history", s.history},
                     {"x", detail::matrix_json(s.assignment.x)},
                     {"y", detail::matrix_json(s.assignment.y)},
                     {"z", std::vector<int>(s.assignment.z.data(), s.assignment.z.data() + s.assignment.z.size())},
                     {"rho", detail::matrix_json(s.power.rho)}};
  if (s.success)
    j["report"] = s.report;
  else
    j["failure"] = s.failure;
}

inline void to_json(nlohmann::json& j, const SocpOptions& o) {
  j = nlohmann::json{{"max_iter", o.max_iter}, {"feastol", o.feastol}, {"abstol", o.abstol}, {"reltol", o.reltol}};
}

inline void from_json(const nlohmann::json& j, SocpOptions& o) {
  o.max_iter = j.value("max_iter", o.max_iter);
  o.feastol = j.value("feastol", o.feastol);
  o.abstol = j.value("abstol", o.abstol);
  o.reltol = j.value("reltol", o.reltol);
}

inline void to_json(nlohmann::json& j, const SolveOptions& o) {
  j = nlohmann::json{{"lambda", o.lambda},
                     {"max_outer_iters", o.max_outer_iters},
                     {"tol_obj", o.tol_obj},
                     {"slack_tol", o.slack_tol},
                     {"random_trials", o.random_trials},
                     {"node_limit", o.milp.node_limit},
                     {"milp_gap", o.milp.gap_tol},
                     {"socp", o.socp}};
}

/// `seed` is not read from JSON: each drop derives it from the master seed.
inline void from_json(const nlohmann::json& j, SolveOptions& o) {
  o.lambda = j.value("lambda", o.lambda);
  o.max_outer_iters = j.value("max_outer_iters", o.max_outer_iters);
  o.tol_obj = j.value("tol_obj", o.tol_obj);
  o.slack_tol = j.value("slack_tol", o.slack_tol);
  o.random_trials = j.value("random_trials", o.random_trials);
  o.milp.node_limit = j.value("node_limit", o.milp.node_limit);
  o.milp.gap_tol = j.value("milp_gap", o.milp.gap_tol);
  if (j.contains("socp")) j.at("socp").get_to(o.socp);
}

}  // namespace cfed
