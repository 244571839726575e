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

// Power allocation with the binaries held fixed.
//
// Without slack, rho(s, f) is pinned to zero wherever y(s, f) = 0, so each
// active CSP carries a single power variable and the PA term
// sum_s sqrt(sum_f rho^2) is linear. With slack, every (s, f) pair gets a
// variable; power on a pair with y = 0 is cap slack eps = rho / rho_unit and
// pays the penalty, and the PA term is taken as sum_{s,f} rho, which equals
// the norm form whenever each CSP powers at most one federation. The SINR
// constraints are second-order cones:
//
//   sqrt(thr_k) || (rho .* sqrt(beta_k), sigma) || <= sqrt(M/tau_p) sum_s rho_s sqrt(gamma_ks) + slack_k
//
// Internally rho is measured in units of sigma / sqrt(max beta) and the SINR
// slack in units of sigma; objective coefficients are in micro-Joules.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cfed/assignment.hpp"
#include "cfed/model.hpp"
#include "cfed/socp.hpp"

namespace cfed {

inline constexpr double kMicroJoulesPerJoule = 1e6;

/// 10^4 times the cost of one active CSP plus one active ECSP.
inline double default_lambda(const ObjectiveCoefficients& c) { return 1e4 * (c.csp_static_j + c.ecsp_j); }

struct PowerSocp {
  SocpInstance instance;
  std::vector<std::array<int, 2>> rho_vars;    // (s, f)
  std::vector<std::array<int, 2>> slack_vars;  // (k, f)
  double rho_unit = 1.0;                       // sqrt(W) per solver unit
};

inline double rho_unit(const FederationProblem& p) {
  const double bmax = p.beta.size() > 0 ? p.beta.maxCoeff() : 1.0;
  return std::sqrt(p.noise_power_w / bmax);
}

/// SINR upper bound from Cauchy-Schwarz: (M/tau_p) sum_s gamma_ks / beta_ks over
/// the federation's active CSPs. Strict because sigma^2 > 0.
inline double sinr_ceiling(const FederationProblem& p, const Assignment& a, int k, int f) {
  double sum = 0.0;
  for (int s = 0; s < p.num_csps; ++s)
    if (a.y(s, f) == 1) sum += p.gamma(k, s) / p.beta(k, s);
  return p.array_gain() * sum;
}

/// Counting certificate of infeasibility. UE k needs at least n_k CSPs in its
/// federation before its SINR ceiling clears the target (strongest
/// gamma / beta first). Federations share no CSPs and hold at most tau_p UEs,
/// so any assignment uses at least n_(1) + n_(tau_p + 1) + n_(2 tau_p + 1) + ...
/// CSPs with n sorted in decreasing order. True when that exceeds S or some UE
/// misses its target even with every CSP.
inline bool provably_infeasible(const FederationProblem& p) {
  std::vector<int> need;
  std::vector<double> ratio(static_cast<std::size_t>(p.num_csps));
  for (int k = 0; k < p.num_ues; ++k) {
    if (p.sinr_thr(k) <= 0) {
      need.push_back(0);
      continue;
    }
    for (int s = 0; s < p.num_csps; ++s) ratio[static_cast<std::size_t>(s)] = p.gamma(k, s) / p.beta(k, s);
    std::sort(ratio.begin(), ratio.end(), std::greater<>());
    double sum = 0.0;
    int n = 0;
    while (n < p.num_csps && p.array_gain() * sum <= p.sinr_thr(k)) sum += ratio[static_cast<std::size_t>(n++)];
    if (p.array_gain() * sum <= p.sinr_thr(k)) return true;
    need.push_back(n);
  }
  std::sort(need.begin(), need.end(), std::greater<>());
  long total = 0;
  for (std::size_t i = 0; i < need.size(); i += static_cast<std::size_t>(std::max(1, p.pilot_len))) total += need[i];
  return total > p.num_csps;
}

/// `federation` < 0 builds the joint instance over all federations.
inline PowerSocp build_power_socp(const FederationProblem& p, const Assignment& a, double lambda,
                                  bool with_slack = true, int federation = -1) {
  PowerSocp out;
  const double u = rho_unit(p);
  const double sigma = std::sqrt(p.noise_power_w);
  const double gain = std::sqrt(p.array_gain());
  out.rho_unit = u;

  std::vector<int> feds;
  for (int f = 0; f < p.num_federations; ++f)
    if (federation < 0 || f == federation) feds.push_back(f);

  std::vector<std::vector<int>> rho_index(static_cast<std::size_t>(p.num_federations));
  for (int f : feds) {
    auto& idx = rho_index[static_cast<std::size_t>(f)];
    idx.assign(static_cast<std::size_t>(p.num_csps), -1);
    for (int s = 0; s < p.num_csps; ++s)
      if (a.y(s, f) == 1 || with_slack) {
        idx[static_cast<std::size_t>(s)] = static_cast<int>(out.rho_vars.size());
        out.rho_vars.push_back({s, f});
      }
  }
  std::vector<std::array<int, 2>> cones;
  for (int f : feds)
    for (int k = 0; k < p.num_ues; ++k)
      if (a.x(k, f) == 1 && p.sinr_thr(k) > 0) cones.push_back({k, f});
  const int nrho = static_cast<int>(out.rho_vars.size());
  if (with_slack) out.slack_vars = cones;
  const int n = nrho + static_cast<int>(out.slack_vars.size());

  auto& in = out.instance;
  in.objective = Eigen::VectorXd::Zero(n);
  in.lower = Eigen::VectorXd::Zero(n);
  in.upper = Eigen::VectorXd::Zero(n);
  in.ineq_A.resize(0, n);
  in.ineq_b.resize(0);
  const double rho_cost = p.coeff.pa_per_sqrt_w * u * kMicroJoulesPerJoule;
  for (int i = 0; i < nrho; ++i) {
    const auto [s, f] = out.rho_vars[static_cast<std::size_t>(i)];
    in.objective(i) = rho_cost + (a.y(s, f) == 1 ? 0.0 : lambda * kMicroJoulesPerJoule);
    in.upper(i) = p.sqrt_pmax() / u;
  }

  for (std::size_t c = 0; c < cones.size(); ++c) {
    const auto [k, f] = cones[c];
    const double rt = std::sqrt(p.sinr_thr(k));
    const auto& idx = rho_index[static_cast<std::size_t>(f)];
    std::vector<int> members;
    for (int s = 0; s < p.num_csps; ++s)
      if (idx[static_cast<std::size_t>(s)] >= 0) members.push_back(s);
    ConeConstraint cone;
    const auto m = static_cast<Eigen::Index>(members.size());
    cone.A = Eigen::MatrixXd::Zero(m + 1, n);
    cone.b = Eigen::VectorXd::Zero(m + 1);
    cone.c = Eigen::VectorXd::Zero(n);
    double worst_lhs = p.noise_power_w;
    for (Eigen::Index r = 0; r < m; ++r) {
      const int s = members[static_cast<std::size_t>(r)];
      const int v = idx[static_cast<std::size_t>(s)];
      cone.A(r, v) = rt * std::sqrt(p.beta(k, s)) * u / sigma;
      cone.c(v) = gain * std::sqrt(p.gamma(k, s)) * u / sigma;
      worst_lhs += p.energy.pt_max_w * p.beta(k, s);
    }
    cone.b(m) = rt;
    if (with_slack) {
      const int v = nrho + static_cast<int>(c);
      cone.c(v) = 1.0;
      in.objective(v) = lambda * kMicroJoulesPerJoule;
      in.upper(v) = rt * std::sqrt(worst_lhs) / sigma;  // slack that satisfies the cone at any rho
    }
    in.cones.push_back(std::move(cone));
  }
  return out;
}

struct PowerResult {
  SocpStatus status = SocpStatus::optimal;
  PowerAllocation power;
  Eigen::MatrixXd slack;  // K x F, in units of sigma
  double pa_energy_j = 0.0;  // pa_per_sqrt_w * sum_{s,f} rho
  double slack_sum = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
};

namespace detail {

inline int status_rank(SocpStatus s) {
  switch (s) {
    case SocpStatus::optimal: return 0;
    case SocpStatus::max_iter: return 1;
    case SocpStatus::numerical_failure: return 2;
    case SocpStatus::unbounded: return 3;
    case SocpStatus::infeasible: return 4;
  }
  return 4;
}

/// Scales federation f's powers up just enough to clear every SINR target
/// left short by solver tolerance; SINR grows monotonically with the scale.
inline void lift_to_thresholds(const FederationProblem& p, const Assignment& a, int f, PowerAllocation& pw) {
  double scale = 1.0;
  for (int k = 0; k < p.num_ues; ++k) {
    if (a.x(k, f) == 0 || p.sinr_thr(k) <= 0) continue;
    double coh = 0.0, intf = 0.0;
    for (int s = 0; s < p.num_csps; ++s) {
      coh += pw.rho(s, f) * std::sqrt(p.gamma(k, s));
      intf += pw.rho(s, f) * pw.rho(s, f) * p.beta(k, s);
    }
    const double thr = p.sinr_thr(k) * (1.0 + 1e-9);
    const double denom = p.array_gain() * coh * coh - thr * intf;
    if (denom <= 0) continue;
    const double need = std::sqrt(thr * p.noise_power_w / denom);
    scale = std::max(scale, need);
  }
  if (scale > 1.0)
    for (int s = 0; s < p.num_csps; ++s) pw.rho(s, f) = std::min(pw.rho(s, f) * scale, p.sqrt_pmax());
}

}  // namespace detail

/// Solves the federations as independent blocks. Without slack, a federation
/// whose SINR ceiling already misses a target is reported infeasible without
/// calling the solver.
inline PowerResult solve_power(const FederationProblem& p, const Assignment& a, double lambda, bool with_slack,
                               const SocpOptions& opt = {}) {
  PowerResult res;
  res.power.rho = Eigen::MatrixXd::Zero(p.num_csps, p.num_federations);
  res.slack = Eigen::MatrixXd::Zero(p.num_ues, p.num_federations);
  for (int f = 0; f < p.num_federations; ++f) {
    if (!with_slack) {
      bool hopeless = false;
      for (int k = 0; k < p.num_ues && !hopeless; ++k)
        if (a.x(k, f) == 1 && p.sinr_thr(k) > 0 && sinr_ceiling(p, a, k, f) <= p.sinr_thr(k)) hopeless = true;
      if (hopeless) {
        res.status = SocpStatus::infeasible;
        continue;
      }
    }
    const PowerSocp blk = build_power_socp(p, a, lambda, with_slack, f);
    if (blk.instance.cones.empty()) continue;  // nothing needs power: optimum is rho = 0
    const SocpSolution sol = solve_socp(blk.instance, opt);
    res.iterations += sol.iterations;
    res.kkt_residual = std::max(res.kkt_residual, sol.kkt_residual);
    if (detail::status_rank(sol.status) > detail::status_rank(res.status)) res.status = sol.status;
    if (sol.status != SocpStatus::optimal) continue;
    for (std::size_t i = 0; i < blk.rho_vars.size(); ++i) {
      const auto [s, ff] = blk.rho_vars[i];
      double v = sol.values(static_cast<Eigen::Index>(i));
      if (with_slack && v < 10.0 * opt.feastol) v = 0.0;  // complementarity residue, not power
      res.power.rho(s, ff) = std::clamp(v * blk.rho_unit, 0.0, p.sqrt_pmax());
    }
    for (std::size_t i = 0; i < blk.slack_vars.size(); ++i) {
      const auto [k, ff] = blk.slack_vars[i];
      res.slack(k, ff) = std::max(0.0, sol.values(static_cast<Eigen::Index>(blk.rho_vars.size() + i)));
    }
    if (!with_slack) detail::lift_to_thresholds(p, a, f, res.power);
  }
  res.pa_energy_j = p.coeff.pa_per_sqrt_w * res.power.rho.sum();
  res.slack_sum = res.slack.sum();
  return res;
}

/// True iff the slack-free allocation exists within the power cap.
inline bool power_feasible(const FederationProblem& p, const Assignment& a, const SocpOptions& opt = {}) {
  const PowerResult r = solve_power(p, a, default_lambda(p.coeff), false, opt);
  if (r.status == SocpStatus::numerical_failure) throw Error("power_feasible: numerical failure in cone solver");
  return r.status == SocpStatus::optimal;
}

}  // namespace cfed
