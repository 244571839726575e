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

// Decision variables, downlink SINR/rate under MRT with equal power split,
// and a constraint verifier that shares no code with the solvers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cfed/assignment.hpp"
#include "cfed/channel.hpp"
#include "cfed/energy.hpp"
#include "cfed/error.hpp"
#include "cfed/scenario.hpp"

namespace cfed {

/// Threshold SINR equivalent to `rate_bps` over `bandwidth_hz` once the
/// pilot overhead tau_p / tau_c is removed: 2^(R tau_c / (tau_c - tau_p)) - 1.
inline double sinr_threshold(double rate_bps, double bandwidth_hz, int coherence_len, int pilot_len) {
  if (rate_bps < 0) throw Error("sinr_threshold: negative rate");
  const double se = rate_bps / bandwidth_hz;
  return std::exp2(se * coherence_len / (coherence_len - pilot_len)) - 1.0;
}

struct RateRequirement {
  Eigen::VectorXd r_thr_se;  // bit/s/Hz per UE
  Eigen::VectorXd sinr_thr;  // linear per UE

  static RateRequirement uniform(int ues, double rate_bps, double bandwidth_hz, int coherence_len, int pilot_len) {
    RateRequirement r;
    r.r_thr_se = Eigen::VectorXd::Constant(ues, rate_bps / bandwidth_hz);
    r.sinr_thr = Eigen::VectorXd::Constant(ues, sinr_threshold(rate_bps, bandwidth_hz, coherence_len, pilot_len));
    return r;
  }
};

/// Everything the optimizers need about one drop, flattened into value types.
struct FederationProblem {
  int num_csps = 0;
  int num_ecsps = 0;
  int num_ues = 0;
  int num_federations = 0;
  int antennas = 0;
  int pilot_len = 0;
  int coherence_len = 0;
  double noise_power_w = 0;
  Eigen::MatrixXd beta;   // K x S
  Eigen::MatrixXd gamma;  // K x S
  Eigen::VectorXd sinr_thr;
  std::vector<int> ecsp_of_csp;
  std::vector<std::vector<int>> ecsp_members;
  std::vector<Point3> csp_positions;
  std::vector<Point3> ue_positions;
  EnergyParams energy;
  ObjectiveCoefficients coeff;

  double sqrt_pmax() const { return std::sqrt(energy.pt_max_w); }
  double array_gain() const { return static_cast<double>(antennas) / pilot_len; }  // M / tau_p
};

inline FederationProblem make_problem(const Scenario& sc, const ChannelRealization& ch, const RateRequirement& req,
                                      const ChannelParams& cp, const EnergyParams& ep) {
  ep.validate();
  if (ep.pa_exponent != 0.5) throw ConfigError("energy.pa_exponent", "the optimizer requires 0.5");
  FederationProblem p;
  p.num_csps = sc.config.num_csps;
  p.num_ecsps = sc.config.num_ecsps;
  p.num_ues = sc.config.num_ues;
  p.num_federations = sc.config.num_federations;
  p.antennas = sc.config.antennas_per_csp;
  p.pilot_len = sc.pilot_len();
  p.coherence_len = sc.config.coherence_len;
  p.noise_power_w = cp.noise_power_w;
  if (ch.beta.rows() != p.num_ues || ch.beta.cols() != p.num_csps || ch.gamma.rows() != p.num_ues ||
      ch.gamma.cols() != p.num_csps)
    throw ShapeError("channel realization does not match scenario dimensions");
  if (req.sinr_thr.size() != p.num_ues) throw ShapeError("rate requirement length differs from UE count");
  p.beta = ch.beta;
  p.gamma = ch.gamma;
  p.sinr_thr = req.sinr_thr.cwiseMax(0.0);
  p.ecsp_of_csp = sc.ecsp_of_csp();
  p.ecsp_members = sc.ecsp_partition;
  p.csp_positions = sc.csp_positions;
  p.ue_positions = sc.ue_positions;
  p.energy = ep;
  p.coeff = objective_coefficients(ep, p.antennas, p.coherence_len, p.pilot_len);
  return p;
}

inline void check_shapes(const FederationProblem& p, const Assignment& a, const PowerAllocation& pw) {
  if (a.x.rows() != p.num_ues || a.x.cols() != p.num_federations) throw ShapeError("x must be K x F");
  if (a.y.rows() != p.num_csps || a.y.cols() != p.num_federations) throw ShapeError("y must be S x F");
  if (a.z.size() != p.num_ecsps) throw ShapeError("z must have one entry per ECSP");
  if (pw.rho.rows() != p.num_csps || pw.rho.cols() != p.num_federations) throw ShapeError("rho must be S x F");
}

/// (M/tau_p) (sum_f sum_s x rho sqrt(gamma))^2 / (sum_f sum_s x rho^2 beta + sigma^2).
inline double achieved_sinr(const FederationProblem& p, int k, const Assignment& a, const PowerAllocation& pw) {
  double coherent = 0.0;
  double interference = 0.0;
  for (int f = 0; f < p.num_federations; ++f) {
    if (a.x(k, f) == 0) continue;
    for (int s = 0; s < p.num_csps; ++s) {
      const double r = pw.rho(s, f);
      coherent += r * std::sqrt(p.gamma(k, s));
      interference += r * r * p.beta(k, s);
    }
  }
  return p.array_gain() * coherent * coherent / (interference + p.noise_power_w);
}

inline double rate_from_sinr(double sinr, int coherence_len, int pilot_len) {
  return static_cast<double>(coherence_len - pilot_len) / coherence_len * std::log2(1.0 + sinr);
}

inline double achieved_rate_se(const FederationProblem& p, int k, const Assignment& a, const PowerAllocation& pw) {
  return rate_from_sinr(achieved_sinr(p, k, a, pw), p.coherence_len, p.pilot_len);
}

struct Tolerances {
  double sinr_rel = 1e-6;
  double power_abs = 1e-9;  // sqrt(W)
  double binary = 1e-6;
};

/// Constraint families are tagged with the labels of the formulation:
/// 7b SINR per (k, f), 7c power cap, 7d ECSP activation, 7e one federation
/// per UE, 7f pilot capacity, binary integrality.
struct SolutionReport {
  bool feasible = false;
  std::map<std::string, double> max_violation;
  std::vector<std::string> violated;
  Eigen::VectorXd sinr;
  Eigen::VectorXd rate_se;
  double objective_j = 0;
  double avg_power_w = 0;
};

inline SolutionReport verify_solution(const FederationProblem& p, const Assignment& a, const PowerAllocation& pw,
                                      const Tolerances& tol = {}) {
  check_shapes(p, a, pw);
  SolutionReport rep;
  const int K = p.num_ues, S = p.num_csps, F = p.num_federations;
  for (const char* fam : {"7b", "7c", "7d", "7e", "7f", "binary"}) rep.max_violation[fam] = 0.0;
  auto bump = [&](const char* fam, double v) { rep.max_violation[fam] = std::max(rep.max_violation[fam], v); };

  auto is_binary = [](int v) { return v == 0 || v == 1; };
  for (int k = 0; k < K; ++k)
    for (int f = 0; f < F; ++f)
      if (!is_binary(a.x(k, f))) bump("binary", std::abs(a.x(k, f)));
  for (int s = 0; s < S; ++s)
    for (int f = 0; f < F; ++f)
      if (!is_binary(a.y(s, f))) bump("binary", std::abs(a.y(s, f)));
  for (int e = 0; e < p.num_ecsps; ++e)
    if (!is_binary(a.z(e))) bump("binary", std::abs(a.z(e)));

  // 7b in its per-federation form.
  for (int k = 0; k < K; ++k) {
    const double thr = p.sinr_thr(k);
    for (int f = 0; f < F; ++f) {
      if (a.x(k, f) == 0 || thr <= 0) continue;
      double coherent = 0.0, interference = 0.0;
      for (int s = 0; s < S; ++s) {
        coherent += pw.rho(s, f) * std::sqrt(p.gamma(k, s));
        interference += pw.rho(s, f) * pw.rho(s, f) * p.beta(k, s);
      }
      const double lhs = p.array_gain() * coherent * coherent;
      const double rhs = thr * (interference + p.noise_power_w);
      bump("7b", std::max(0.0, (rhs - lhs) / rhs));
    }
  }
  // 7c, including non-negativity.
  for (int s = 0; s < S; ++s)
    for (int f = 0; f < F; ++f) {
      bump("7c", std::max(0.0, pw.rho(s, f) - p.sqrt_pmax() * a.y(s, f)));
      bump("7c", std::max(0.0, -pw.rho(s, f)));
    }
  // 7d
  for (int s = 0; s < S; ++s) {
    const int e = p.ecsp_of_csp[static_cast<std::size_t>(s)];
    bump("7d", std::max(0, a.y.row(s).sum() - a.z(e)));
  }
  // 7e
  for (int k = 0; k < K; ++k) bump("7e", std::abs(a.x.row(k).sum() - 1));
  // 7f
  for (int f = 0; f < F; ++f) bump("7f", std::max(0, a.x.col(f).sum() - p.pilot_len));

  const std::map<std::string, double> limit{{"7b", tol.sinr_rel}, {"7c", tol.power_abs}, {"7d", 0.0},
                                            {"7e", 0.0},          {"7f", 0.0},           {"binary", 0.0}};
  for (const auto& [fam, v] : rep.max_violation)
    if (v > limit.at(fam)) rep.violated.push_back(fam);
  rep.feasible = rep.violated.empty();

  rep.sinr.resize(K);
  rep.rate_se.resize(K);
  for (int k = 0; k < K; ++k) {
    rep.sinr(k) = achieved_sinr(p, k, a, pw);
    rep.rate_se(k) = rate_from_sinr(rep.sinr(k), p.coherence_len, p.pilot_len);
  }
  const auto e = objective_energy(a, pw, p.coeff);
  rep.objective_j = e.total_j;
  rep.avg_power_w = e.avg_power_w;
  return rep;
}

inline void to_json(nlohmann::json& j, const SolutionReport& r) {
  j = nlohmann::json{{"feasible", r.feasible},
                     {"max_violation", r.max_violation},
                     {"violated", r.violated},
                     {"sinr", std::vector<double>(r.sinr.data(), r.sinr.data() + r.sinr.size())},
                     {"rate_se", std::vector<double>(r.rate_se.data(), r.rate_se.data() + r.rate_se.size())},
                     {"objective_j", r.objective_j},
                     {"avg_power_w", r.avg_power_w}};
}

}  // namespace cfed
