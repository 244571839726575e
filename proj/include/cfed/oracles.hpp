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

// Reference implementations used to check the solvers: a dense tableau
// simplex, exhaustive MILP enumeration, the single-link power closed form and
// a joint enumeration of all binaries for tiny deployments. They favour
// obviousness over speed and share no code with the production solvers except
// where noted (the joint oracle calls the cone solver per candidate).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfed/channel.hpp"
#include "cfed/conesolve.hpp"
#include "cfed/energy.hpp"
#include "cfed/lp.hpp"
#include "cfed/milp.hpp"
#include "cfed/mipsolve.hpp"
#include "cfed/model.hpp"
#include "cfed/orchestrator.hpp"
#include "cfed/rng.hpp"
#include "cfed/scenario.hpp"

namespace cfed::oracle {

// Tableau simplex ---------------------------------------------------------------

/// Two-phase dense tableau simplex with Bland's rule. Lower bounds must be
/// finite; finite upper bounds become explicit rows.
inline LpSolution tableau_simplex(const LpInstance& in) {
  in.validate();
  const int n = static_cast<int>(in.num_vars());
  for (int j = 0; j < n; ++j)
    if (!std::isfinite(in.lower(j))) throw Error("tableau oracle: lower bounds must be finite");

  struct Row {
    Eigen::VectorXd a;
    RowSense sense;
    double b;
  };
  std::vector<Row> rows;
  for (Eigen::Index i = 0; i < in.num_rows(); ++i) {
    Eigen::VectorXd a = in.A.row(i).transpose();
    rows.push_back({a, in.sense[static_cast<std::size_t>(i)], in.rhs(i) - a.dot(in.lower)});
  }
  for (int j = 0; j < n; ++j)
    if (std::isfinite(in.upper(j))) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      a(j) = 1.0;
      rows.push_back({a, RowSense::le, in.upper(j) - in.lower(j)});
    }
  for (auto& r : rows)
    if (r.b < 0) {
      r.a = -r.a;
      r.b = -r.b;
      r.sense = r.sense == RowSense::le ? RowSense::ge : r.sense == RowSense::ge ? RowSense::le : RowSense::eq;
    }

  const int m = static_cast<int>(rows.size());
  int n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.sense != RowSense::eq) ++n_slack;
    if (r.sense != RowSense::le) ++n_art;
  }
  const int N = n + n_slack + n_art;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, N + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  std::vector<char> artificial(static_cast<std::size_t>(N), 0);
  int next_slack = n, next_art = n + n_slack;
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    T.row(i).head(n) = r.a.transpose();
    T(i, N) = r.b;
    if (r.sense == RowSense::le) {
      T(i, next_slack) = 1.0;
      basis[static_cast<std::size_t>(i)] = next_slack++;
    } else {
      if (r.sense == RowSense::ge) T(i, next_slack++) = -1.0;
      T(i, next_art) = 1.0;
      artificial[static_cast<std::size_t>(next_art)] = 1;
      basis[static_cast<std::size_t>(i)] = next_art++;
    }
  }

  const Eigen::MatrixXd T0 = T;
  constexpr double eps = 1e-11;
  auto pivot = [&](int r, int c, Eigen::VectorXd& obj) {
    T.row(r) /= T(r, c);
    for (int i = 0; i < m; ++i)
      if (i != r && T(i, c) != 0.0) T.row(i) -= T(i, c) * T.row(r);
    if (obj(c) != 0.0) obj -= obj(c) * T.row(r).transpose();
    basis[static_cast<std::size_t>(r)] = c;
  };
  // Returns 0 optimal, 1 unbounded, 2 iteration limit. obj(N) holds -value.
  auto run = [&](const Eigen::VectorXd& cost, const std::vector<char>& allowed, Eigen::VectorXd& obj) {
    obj = Eigen::VectorXd::Zero(N + 1);
    obj.head(N) = cost;
    for (int i = 0; i < m; ++i) obj -= cost(basis[static_cast<std::size_t>(i)]) * T.row(i).transpose();
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < N; ++j)
        if (allowed[static_cast<std::size_t>(j)] && obj(j) < -1e-10) {
          enter = j;
          break;
        }
      if (enter < 0) return 0;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) <= eps) continue;
        const double ratio = T(i, N) / T(i, enter);
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          if (ratio < best - 1e-12) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return 1;
      pivot(leave, enter, obj);
    }
    return 2;
  };

  LpSolution out;
  Eigen::VectorXd obj;
  std::vector<char> all(static_cast<std::size_t>(N), 1);
  if (n_art > 0) {
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(N);
    for (int j = 0; j < N; ++j)
      if (artificial[static_cast<std::size_t>(j)]) c1(j) = 1.0;
    if (run(c1, all, obj) == 2) {
      out.status = LpStatus::iteration_limit;
      return out;
    }
    const double scale = std::max(1.0, T.col(N).cwiseAbs().maxCoeff());
    if (-obj(N) > 1e-9 * scale) {
      out.status = LpStatus::infeasible;
      return out;
    }
    for (int i = 0; i < m; ++i) {
      if (!artificial[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])]) continue;
      for (int j = 0; j < N; ++j)
        if (!artificial[static_cast<std::size_t>(j)] && std::abs(T(i, j)) > 1e-9) {
          pivot(i, j, obj);
          break;
        }
    }
  }
  std::vector<char> allowed(static_cast<std::size_t>(N), 1);
  for (int j = 0; j < N; ++j)
    if (artificial[static_cast<std::size_t>(j)]) allowed[static_cast<std::size_t>(j)] = 0;
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(N);
  c2.head(n) = in.cost;
  const int st = run(c2, allowed, obj);
  if (st == 1) {
    out.status = LpStatus::unbounded;
    return out;
  }
  if (st == 2) {
    out.status = LpStatus::iteration_limit;
    return out;
  }
  // Re-solve the final basis against the original columns to shed pivot drift.
  Eigen::MatrixXd B(m, m);
  for (int i = 0; i < m; ++i) B.col(i) = T0.col(basis[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd xb = B.partialPivLu().solve(T0.col(N));
  out.values = in.lower;
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < n) out.values(basis[static_cast<std::size_t>(i)]) += std::max(0.0, xb(i));
  out.objective = in.cost.dot(out.values);
  out.status = LpStatus::optimal;
  return out;
}

// MILP enumeration ----------------------------------------------------------------

struct EnumerationResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd values;
  long leaves = 0;
};

/// Every 0/1 pattern of the integer variables, with the remaining LP solved by
/// the tableau oracle.
inline EnumerationResult enumerate_milp(const MilpInstance& in, int size_limit = 16) {
  in.validate();
  const int nb = static_cast<int>(in.integer_vars.size());
  if (nb > size_limit) throw Error("enumeration oracle: too many binaries");
  EnumerationResult out;
  LpInstance fixed = in.lp;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nb); ++mask) {
    bool ok = true;
    for (int b = 0; b < nb; ++b) {
      const int j = in.integer_vars[static_cast<std::size_t>(b)];
      const double v = static_cast<double>((mask >> b) & 1U);
      if (v < in.lp.lower(j) || v > in.lp.upper(j)) ok = false;
      fixed.lower(j) = fixed.upper(j) = v;
    }
    if (!ok) continue;
    ++out.leaves;
    const LpSolution s = tableau_simplex(fixed);
    if (s.status == LpStatus::optimal && s.objective < out.objective) {
      out.feasible = true;
      out.objective = s.objective;
      out.values = s.values;
    }
  }
  return out;
}

// Single-link closed form --------------------------------------------------------------

/// Minimum rho meeting the SINR target for one UE served by one CSP, or a
/// negative value when no finite power does.
inline double single_link_rho(double thr, double sigma2, double gain, double gamma, double beta) {
  const double denom = gain * gamma - thr * beta;
  if (denom <= 0) return -1.0;
  return std::sqrt(thr * sigma2 / denom);
}

/// One UE, one CSP, one ECSP, one federation, everything switched on.
inline FederationProblem single_link_problem(double beta, double gamma, double thr, int antennas, int pilot_len,
                                             const EnergyParams& ep = {}, double sigma2 = ChannelParams{}.noise_power_w) {
  FederationProblem p;
  p.num_csps = p.num_ecsps = p.num_ues = p.num_federations = 1;
  p.antennas = antennas;
  p.pilot_len = pilot_len;
  p.coherence_len = 200;
  p.noise_power_w = sigma2;
  p.beta = Eigen::MatrixXd::Constant(1, 1, beta);
  p.gamma = Eigen::MatrixXd::Constant(1, 1, gamma);
  p.sinr_thr = Eigen::VectorXd::Constant(1, thr);
  p.ecsp_of_csp = {0};
  p.ecsp_members = {{0}};
  p.csp_positions = {Point3{}};
  p.ue_positions = {Point3{}};
  p.energy = ep;
  p.coeff = objective_coefficients(ep, antennas, p.coherence_len, pilot_len);
  return p;
}

// Joint enumeration ------------------------------------------------------------------

struct JointResult {
  bool feasible = false;
  double objective_j = std::numeric_limits<double>::infinity();
  Assignment assignment;
  PowerAllocation power;
  long candidates = 0;
  long cone_solves = 0;
};

/// Enumerates every UE partition respecting pilot capacity and every CSP
/// placement (off or in one federation), with z the smallest consistent
/// choice. Candidates are visited in order of static cost so the search stops
/// once no cheaper one remains; each survivor gets a slack-free cone solve.
inline JointResult joint_enumeration(const FederationProblem& p, const SocpOptions& opt = {}) {
  const int K = p.num_ues, S = p.num_csps, F = p.num_federations;
  double combos = std::pow(F, K) * std::pow(F + 1, S);
  if (combos > 2e6) throw Error("joint oracle: instance too large to enumerate");

  std::vector<Eigen::MatrixXi> xs;
  {
    std::vector<int> pick(static_cast<std::size_t>(K), 0);
    for (long c = 0; c < static_cast<long>(std::pow(F, K)); ++c) {
      long r = c;
      std::vector<int> load(static_cast<std::size_t>(F), 0);
      Eigen::MatrixXi x = Eigen::MatrixXi::Zero(K, F);
      bool ok = true;
      for (int k = 0; k < K; ++k) {
        const int f = static_cast<int>(r % F);
        r /= F;
        x(k, f) = 1;
        if (++load[static_cast<std::size_t>(f)] > p.pilot_len) ok = false;
      }
      if (ok) xs.push_back(x);
    }
  }
  struct Candidate {
    double static_j;
    long y_code;
    std::size_t x_index;
  };
  std::vector<Candidate> cands;
  for (long c = 0; c < static_cast<long>(std::pow(F + 1, S)); ++c) {
    Assignment a = Assignment::zeros(K, S, p.num_ecsps, F);
    long r = c;
    for (int s = 0; s < S; ++s) {
      const int f = static_cast<int>(r % (F + 1)) - 1;
      r /= F + 1;
      if (f >= 0) a.y(s, f) = 1;
    }
    a.sync_ecsps(p.ecsp_of_csp);
    const double st = a.active_csps() * p.coeff.csp_static_j + a.active_ecsps() * p.coeff.ecsp_j;
    for (std::size_t i = 0; i < xs.size(); ++i) cands.push_back({st, c, i});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.static_j < b.static_j; });

  JointResult out;
  out.assignment = Assignment::zeros(K, S, p.num_ecsps, F);
  out.power.rho = Eigen::MatrixXd::Zero(S, F);
  for (const auto& c : cands) {
    if (out.feasible && c.static_j >= out.objective_j) break;
    ++out.candidates;
    Assignment a = Assignment::zeros(K, S, p.num_ecsps, F);
    a.x = xs[c.x_index];
    long r = c.y_code;
    for (int s = 0; s < S; ++s) {
      const int f = static_cast<int>(r % (F + 1)) - 1;
      r /= F + 1;
      if (f >= 0) a.y(s, f) = 1;
    }
    a.sync_ecsps(p.ecsp_of_csp);
    ++out.cone_solves;
    const PowerResult pr = solve_power(p, a, default_lambda(p.coeff), false, opt);
    if (pr.status != SocpStatus::optimal) continue;
    if (!verify_solution(p, a, pr.power).feasible) continue;
    const double total = objective_energy(a, pr.power, p.coeff).total_j;
    if (total < out.objective_j) {
      out.feasible = true;
      out.objective_j = total;
      out.assignment = a;
      out.power = pr.power;
    }
  }
  return out;
}

/// The tiny deployment used for joint checks: 4 CSPs on 2 ECSPs, 3 UEs,
/// 2 federations, pilot length 2, 8 antennas per CSP.
inline ScenarioConfig tiny_scenario(std::uint64_t seed, double rate_mbps) {
  ScenarioConfig c;
  c.num_csps = 4;
  c.num_ecsps = 2;
  c.antennas_per_csp = 8;
  c.num_ues = 3;
  c.num_federations = 2;
  c.pilot_len = 2;
  c.rate_thr_bps = rate_mbps * 1e6;
  c.seed = seed;
  return c;
}

inline FederationProblem make_problem_for(const ScenarioConfig& sc_cfg, const ChannelParams& cp = {},
                                          const EnergyParams& ep = {}) {
  const Scenario sc = build_scenario(sc_cfg);
  const ChannelRealization ch = realize_channel(sc, cp);
  const auto req = RateRequirement::uniform(sc_cfg.num_ues, sc_cfg.rate_thr_bps, 20e6, sc_cfg.coherence_len,
                                            sc.pilot_len());
  return make_problem(sc, ch, req, cp, ep);
}

/// Rate used for tiny seed i; cycles through light, medium and heavy load.
inline double tiny_rate_mbps(int i) {
  static constexpr double kRates[] = {20.0, 30.0, 40.0, 50.0, 60.0};
  return kRates[i % 5];
}

// Random instances ---------------------------------------------------------------------

/// Random 20x40 style LP: A uniform in [-1, 1], box [0, u], mixed row senses
/// with right-hand sides around a random interior point (so most are feasible).
inline LpInstance random_lp(Rng& rng, int m, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.5, 3.0);
  LpInstance lp;
  lp.A = Eigen::MatrixXd::NullaryExpr(m, n, [&]() { return u(rng); });
  lp.cost = Eigen::VectorXd::NullaryExpr(n, [&]() { return u(rng); });
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::NullaryExpr(n, [&]() { return pos(rng); });
  Eigen::VectorXd x0 = Eigen::VectorXd::NullaryExpr(n, [&]() { return std::abs(u(rng)); });
  const Eigen::VectorXd ax = lp.A * x0;
  lp.rhs.resize(m);
  std::uniform_int_distribution<int> kind(0, 5);
  for (int i = 0; i < m; ++i) {
    const int t = kind(rng);
    if (t == 0) {
      lp.sense.push_back(RowSense::eq);
      lp.rhs(i) = ax(i);
    } else if (t <= 2) {
      lp.sense.push_back(RowSense::ge);
      lp.rhs(i) = ax(i) - std::abs(u(rng));
    } else {
      lp.sense.push_back(RowSense::le);
      lp.rhs(i) = ax(i) + std::abs(u(rng)) - (t == 5 ? 2.0 : 0.0);  // some rows cut x0 off
    }
  }
  return lp;
}

/// Binary-heavy MILP with two bounded continuous variables. Integer costs and
/// coefficients keep ties realistic.
inline MilpInstance random_milp(Rng& rng, int binaries) {
  std::uniform_int_distribution<int> coef(-5, 5), rows(3, 7);
  std::uniform_real_distribution<double> cont(-1.0, 1.0);
  const int n = binaries + 2;
  const int m = rows(rng);
  MilpInstance in;
  auto& lp = in.lp;
  lp.A = Eigen::MatrixXd::NullaryExpr(m, n, [&]() { return static_cast<double>(coef(rng)); });
  lp.cost = Eigen::VectorXd::NullaryExpr(n, [&]() { return static_cast<double>(coef(rng)); });
  lp.cost(n - 2) = cont(rng);
  lp.cost(n - 1) = cont(rng);
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Ones(n);
  lp.upper(n - 2) = lp.upper(n - 1) = 4.0;
  lp.rhs.resize(m);
  for (int i = 0; i < m; ++i) {
    lp.sense.push_back(i == 0 ? RowSense::ge : RowSense::le);
    const double mag = lp.A.row(i).cwiseAbs().sum();
    lp.rhs(i) = i == 0 ? -0.2 * mag : 0.25 * mag;
  }
  for (int j = 0; j < binaries; ++j) in.integer_vars.push_back(j);
  return in;
}

// Suite -------------------------------------------------------------------------------

struct OracleCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;  // worst mismatch seen
  std::string detail;
  double seconds = 0.0;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
  }
};

struct OracleSuiteOptions {
  int size_limit = 14;  // binaries per enumerated MILP
  std::uint64_t seed = 1;
  int socp_cases = 100;
  int lp_cases = 100;
  int milp_cases = 50;
  int assignment_cases = 3;
  int joint_seeds = 50;
  double joint_ratio = 1.5;
  double joint_share = 0.9;
  /// Mutation check: negate every SINR threshold before solving.
  bool flip_sinr_sign = false;
  /// Called after each seed of the joint check with (seed, heuristic J, oracle J).
  std::function<void(int, double, double, bool, bool)> on_joint;
};

namespace detail {

template <typename Fn>
OracleCheck timed(const std::string& name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  OracleCheck c = fn();
  c.name = name;
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

inline std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace detail

inline OracleCheck check_energy_golden(const EnergyParams& ep = {}) {
  OracleCheck c;
  // Analytic values from the parameter table.
  const double dac = 34.4e-15 * 4096.0 * 600e6;
  const double eop = 1.2 * (3.1e-12 + 0.10 * 5e-12 + 0.01 * 640e-12);
  const double ecsp = (7.0 + 2.2) * 200.0 / 20e6;
  const double pa3 = 3.0 / (0.34 * std::sqrt(3.0 / 3.0));
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  c.residual = std::max({rel(dac_power(ep), dac), rel(op_energy(ep), eop), rel(ecsp_energy(ep, 200), ecsp),
                         rel(pa_power(3.0, ep), pa3)});
  c.passed = c.residual <= 1e-9;
  c.detail = detail::fmt("P_DAC=%.6g W, P_PA(3 W)=%.6g W", dac_power(ep), pa_power(3.0, ep));
  return c;
}

inline OracleCheck check_socp_closed_form(const OracleSuiteOptions& o) {
  OracleCheck c;
  auto rng = child_stream(o.seed, Stream::solver, 101);
  std::uniform_real_distribution<double> logb(-10.0, -5.0), frac(0.05, 1.5);
  std::uniform_int_distribution<int> ant(4, 64), tau(1, 12);
  const ChannelParams cp;
  int feasible = 0, infeasible = 0, bad = 0;
  for (int i = 0; i < o.socp_cases; ++i) {
    const double beta = std::pow(10.0, logb(rng));
    const int M = ant(rng), tp = tau(rng);
    const double gamma = mmse_variance(beta, tp, cp.pilot_snr);
    const double gain = static_cast<double>(M) / tp;
    const double thr = frac(rng) * gain * gamma / beta;
    FederationProblem p = single_link_problem(beta, gamma, thr, M, tp);
    if (o.flip_sinr_sign) p.sinr_thr = -p.sinr_thr;
    Assignment a = Assignment::zeros(1, 1, 1, 1);
    a.x(0, 0) = a.y(0, 0) = a.z(0) = 1;
    const double rho = single_link_rho(thr, p.noise_power_w, gain, gamma, beta);
    if (rho > 0 && rho <= p.sqrt_pmax()) {
      ++feasible;
      const PowerResult r = solve_power(p, a, default_lambda(p.coeff), false);
      const double err = r.status == SocpStatus::optimal ? std::abs(r.power.rho(0, 0) - rho) / rho : 1.0;
      c.residual = std::max(c.residual, err);
      if (err > 1e-6) ++bad;
    } else {
      ++infeasible;
      const PowerResult r = solve_power(p, a, default_lambda(p.coeff), true);
      if (r.status != SocpStatus::optimal || !(r.slack_sum > 0)) ++bad;
    }
  }
  c.passed = bad == 0;
  c.detail = detail::fmt("%g feasible, %g infeasible, %g mismatches", feasible, infeasible, bad);
  return c;
}

inline OracleCheck check_lp(const OracleSuiteOptions& o) {
  OracleCheck c;
  auto rng = child_stream(o.seed, Stream::solver, 102);
  int bad = 0, optimal = 0;
  for (int i = 0; i < o.lp_cases; ++i) {
    const LpInstance lp = random_lp(rng, 20, 40);
    const LpSolution a = solve_lp(lp);
    const LpSolution b = tableau_simplex(lp);
    if (a.status != b.status) {
      ++bad;
      continue;
    }
    if (a.status != LpStatus::optimal) continue;
    ++optimal;
    const double err = std::abs(a.objective - b.objective) / std::max(1.0, std::abs(b.objective));
    c.residual = std::max(c.residual, err);
    if (err > 1e-8) ++bad;
  }
  c.passed = bad == 0;
  c.detail = detail::fmt("%g optimal of %g, %g mismatches", optimal, o.lp_cases, bad);
  return c;
}

inline OracleCheck check_milp(const OracleSuiteOptions& o) {
  OracleCheck c;
  auto rng = child_stream(o.seed, Stream::solver, 103);
  std::uniform_int_distribution<int> nb(4, std::max(4, o.size_limit));
  int bad = 0, feasible = 0;
  for (int i = 0; i < o.milp_cases; ++i) {
    const MilpInstance in = random_milp(rng, nb(rng));
    const MilpSolution a = solve_milp(in);
    const EnumerationResult b = enumerate_milp(in, o.size_limit);
    if (a.has_incumbent != b.feasible || (a.has_incumbent && a.status != MilpStatus::optimal)) {
      ++bad;
      continue;
    }
    if (!b.feasible) continue;
    ++feasible;
    const double err = std::abs(a.objective - b.objective) / std::max(1.0, std::abs(b.objective));
    c.residual = std::max(c.residual, err);
    if (err > 1e-7) ++bad;
  }
  c.passed = bad == 0;
  c.detail = detail::fmt("%g feasible of %g, %g mismatches", feasible, o.milp_cases, bad);
  return c;
}

/// Assignment MILPs of tiny deployments (16 binaries) built from the powers
/// of a slack SOCP solve under the initial assignment.
inline OracleCheck check_assignment_milp(const OracleSuiteOptions& o) {
  OracleCheck c;
  int bad = 0;
  for (int i = 0; i < o.assignment_cases; ++i) {
    FederationProblem p = make_problem_for(tiny_scenario(drop_seed(o.seed, 7000 + i), tiny_rate_mbps(i + 1)));
    if (o.flip_sinr_sign) p.sinr_thr = -p.sinr_thr;
    const double lambda = default_lambda(p.coeff);
    const PowerResult pr = solve_power(p, initial_assignment(p), lambda, true);
    const AssignmentMilp m = build_assignment_milp(p, pr.power, lambda);
    const MilpSolution a = solve_milp(m.milp);
    const EnumerationResult b = enumerate_milp(m.milp, 16);
    if (a.has_incumbent != b.feasible) {
      ++bad;
      continue;
    }
    const double err = std::abs(a.objective - b.objective) / std::max(1.0, std::abs(b.objective));
    c.residual = std::max(c.residual, err);
    if (err > 1e-7) ++bad;
  }
  c.passed = bad == 0;
  c.detail = detail::fmt("%g instances, %g mismatches", o.assignment_cases, bad);
  return c;
}

/// Full solve against joint enumeration on tiny deployments. Fails when the
/// heuristic misses a feasible instance, beats the oracle by more than 1e-6
/// relative, or stays within joint_ratio on fewer than joint_share of the
/// seeds where the oracle is feasible.
inline OracleCheck check_joint(const OracleSuiteOptions& o) {
  OracleCheck c;
  int oracle_feasible = 0, missed = 0, beaten = 0, within = 0;
  for (int i = 0; i < o.joint_seeds; ++i) {
    FederationProblem p = make_problem_for(tiny_scenario(drop_seed(o.seed, 5000 + i), tiny_rate_mbps(i)));
    if (o.flip_sinr_sign) p.sinr_thr = -p.sinr_thr;
    const JointResult ex = joint_enumeration(p);
    SolveOptions so;
    so.seed = drop_seed(o.seed, 5000 + i);
    const FederationSolution h = solve(p, so);
    if (o.on_joint) o.on_joint(i, h.success ? h.objective_j : -1.0, ex.feasible ? ex.objective_j : -1.0, h.success,
                               ex.feasible);
    if (!ex.feasible) continue;
    ++oracle_feasible;
    if (!h.success) {
      ++missed;
      continue;
    }
    const double ratio = h.objective_j / ex.objective_j;
    c.residual = std::max(c.residual, ratio);
    if (h.objective_j < ex.objective_j * (1.0 - 1e-6)) ++beaten;
    if (ratio <= o.joint_ratio) ++within;
  }
  const bool share_ok = oracle_feasible == 0 || within >= o.joint_share * oracle_feasible;
  c.passed = missed == 0 && beaten == 0 && share_ok && oracle_feasible > 0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "oracle feasible on %d of %d, missed %d, below oracle %d, within %.2fx on %d",
                oracle_feasible, o.joint_seeds, missed, beaten, o.joint_ratio, within);
  c.detail = buf;
  return c;
}

inline OracleReport run_oracle_suite(const OracleSuiteOptions& o = {}) {
  if (o.size_limit < 1 || o.size_limit > 16) throw ConfigError("size_limit", "must lie in [1, 16]");
  OracleReport r;
  r.checks.push_back(detail::timed("energy-golden", [&] { return check_energy_golden(); }));
  r.checks.push_back(detail::timed("socp-closed-form", [&] { return check_socp_closed_form(o); }));
  r.checks.push_back(detail::timed("lp-tableau", [&] { return check_lp(o); }));
  r.checks.push_back(detail::timed("milp-enumeration", [&] { return check_milp(o); }));
  r.checks.push_back(detail::timed("assignment-milp-enumeration", [&] { return check_assignment_milp(o); }));
  r.checks.push_back(detail::timed("joint-enumeration", [&] { return check_joint(o); }));
  return r;
}

inline void print_report(std::ostream& os, const OracleReport& r) {
  char buf[320];
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof buf, "%-4s %-28s residual=%-11.3g %6.2fs  %s\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.residual, c.seconds, c.detail.c_str());
    os << buf;
  }
}

}  // namespace cfed::oracle
