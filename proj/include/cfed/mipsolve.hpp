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

// Federation and CSP/ECSP assignment with the powers held fixed.
//
// Variable order: x (K x F), y (S x F), z (S_bar), eps (S x F), eps_tilde
// (K x F), each block row-major. Both slacks are noise-referred: eps_tilde in
// units of sigma and eps in the cone subproblem's power unit
// sigma / sqrt(max beta), so one penalty weight serves both. Objective
// coefficients are in micro-Joules.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cfed/assignment.hpp"
#include "cfed/conesolve.hpp"
#include "cfed/milp.hpp"
#include "cfed/model.hpp"

namespace cfed {

struct AssignmentLayout {
  int K = 0, S = 0, F = 0, E = 0;

  int x(int k, int f) const { return k * F + f; }
  int y(int s, int f) const { return K * F + s * F + f; }
  int z(int e) const { return K * F + S * F + e; }
  int eps(int s, int f) const { return K * F + S * F + E + s * F + f; }
  int eps_tilde(int k, int f) const { return K * F + 2 * S * F + E + k * F + f; }
  int num_vars() const { return 2 * K * F + 2 * S * F + E; }
};

struct AssignmentMilp {
  MilpInstance milp;
  AssignmentLayout layout;
  Eigen::MatrixXd sinr_gap;   // (B - A) / sigma per (k, f)
  Eigen::MatrixXd cap_ratio;  // rho per (s, f) in units of rho_unit
  double cap_limit = 0.0;     // sqrt(P_t,max) in units of rho_unit
  int pilot_len = 0;
};

/// Builds the assignment MILP for fixed powers. The power-cap row is written
/// as rho <= min(rho, sqrt(P)) y + eps: identical to rho <= sqrt(P) y + eps on
/// binary y when rho <= sqrt(P), with a tighter LP relaxation.
inline AssignmentMilp build_assignment_milp(const FederationProblem& p, const PowerAllocation& pw, double lambda) {
  if (pw.rho.rows() != p.num_csps || pw.rho.cols() != p.num_federations) throw ShapeError("rho must be S x F");
  AssignmentMilp out;
  auto& L = out.layout;
  L = {p.num_ues, p.num_csps, p.num_federations, p.num_ecsps};
  out.pilot_len = p.pilot_len;
  const int n = L.num_vars();
  const double sigma = std::sqrt(p.noise_power_w);
  const double u = rho_unit(p);
  const double scale = kMicroJoulesPerJoule;

  auto& lp = out.milp.lp;
  lp.cost = Eigen::VectorXd::Zero(n);
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Ones(n);

  struct Row {
    std::vector<std::pair<int, double>> terms;
    RowSense sense;
    double rhs;
  };
  std::vector<Row> rows;

  out.sinr_gap = Eigen::MatrixXd::Zero(p.num_ues, p.num_federations);
  out.cap_ratio = pw.rho.cwiseMax(0.0) / u;
  out.cap_limit = p.sqrt_pmax() / u;
  for (int k = 0; k < L.K; ++k)
    for (int f = 0; f < L.F; ++f) {
      double coh = 0.0, intf = 0.0;
      for (int s = 0; s < L.S; ++s) {
        coh += pw.rho(s, f) * std::sqrt(p.gamma(k, s));
        intf += pw.rho(s, f) * pw.rho(s, f) * p.beta(k, s);
      }
      const double A = std::sqrt(p.array_gain()) * coh;
      const double B = std::sqrt(p.sinr_thr(k)) * std::sqrt(intf + p.noise_power_w);
      double g = (B - A) / sigma;
      if (g <= 1e-9 * B / sigma) g = 0.0;  // met up to cone-solver residue
      out.sinr_gap(k, f) = g;
      lp.cost(L.eps_tilde(k, f)) = lambda * scale;
      lp.upper(L.eps_tilde(k, f)) = std::max(0.0, g);
      if (g > 0) rows.push_back({{{L.x(k, f), g}, {L.eps_tilde(k, f), -1.0}}, RowSense::le, 0.0});
    }
  for (int s = 0; s < L.S; ++s)
    for (int f = 0; f < L.F; ++f) {
      lp.cost(L.y(s, f)) = p.coeff.csp_static_j * scale;
      lp.cost(L.eps(s, f)) = lambda * scale;
      lp.upper(L.eps(s, f)) = out.cap_limit;
      const double r = out.cap_ratio(s, f);
      if (r > 0) rows.push_back({{{L.y(s, f), -std::min(r, out.cap_limit)}, {L.eps(s, f), -1.0}}, RowSense::le, -r});
    }
  for (int e = 0; e < L.E; ++e) lp.cost(L.z(e)) = p.coeff.ecsp_j * scale;
  for (int s = 0; s < L.S; ++s) {
    Row r{{}, RowSense::le, 0.0};
    for (int f = 0; f < L.F; ++f) r.terms.push_back({L.y(s, f), 1.0});
    r.terms.push_back({L.z(p.ecsp_of_csp[static_cast<std::size_t>(s)]), -1.0});
    rows.push_back(std::move(r));
  }
  for (int k = 0; k < L.K; ++k) {
    Row r{{}, RowSense::eq, 1.0};
    for (int f = 0; f < L.F; ++f) r.terms.push_back({L.x(k, f), 1.0});
    rows.push_back(std::move(r));
  }
  for (int f = 0; f < L.F; ++f) {
    Row r{{}, RowSense::le, static_cast<double>(p.pilot_len)};
    for (int k = 0; k < L.K; ++k) r.terms.push_back({L.x(k, f), 1.0});
    rows.push_back(std::move(r));
  }

  lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n);
  lp.rhs.resize(static_cast<Eigen::Index>(rows.size()));
  lp.sense.clear();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, v] : rows[i].terms) lp.A(static_cast<Eigen::Index>(i), j) += v;
    lp.rhs(static_cast<Eigen::Index>(i)) = rows[i].rhs;
    lp.sense.push_back(rows[i].sense);
  }
  for (int k = 0; k < L.K; ++k)
    for (int f = 0; f < L.F; ++f) out.milp.integer_vars.push_back(L.x(k, f));
  for (int s = 0; s < L.S; ++s)
    for (int f = 0; f < L.F; ++f) out.milp.integer_vars.push_back(L.y(s, f));
  for (int e = 0; e < L.E; ++e) out.milp.integer_vars.push_back(L.z(e));
  return out;
}

/// Binaries of a MILP point.
inline Assignment decode_assignment(const AssignmentMilp& m, const Eigen::VectorXd& v) {
  const auto& L = m.layout;
  Assignment a = Assignment::zeros(L.K, L.S, L.E, L.F);
  for (int k = 0; k < L.K; ++k)
    for (int f = 0; f < L.F; ++f) a.x(k, f) = static_cast<int>(std::lround(v(L.x(k, f))));
  for (int s = 0; s < L.S; ++s)
    for (int f = 0; f < L.F; ++f) a.y(s, f) = static_cast<int>(std::lround(v(L.y(s, f))));
  for (int e = 0; e < L.E; ++e) a.z(e) = static_cast<int>(std::lround(v(L.z(e))));
  return a;
}

/// Completes binaries with the smallest feasible slacks.
inline Eigen::VectorXd encode_assignment(const AssignmentMilp& m, const Assignment& a) {
  const auto& L = m.layout;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(L.num_vars());
  for (int k = 0; k < L.K; ++k)
    for (int f = 0; f < L.F; ++f) {
      v(L.x(k, f)) = a.x(k, f);
      v(L.eps_tilde(k, f)) = a.x(k, f) ? std::max(0.0, m.sinr_gap(k, f)) : 0.0;
    }
  for (int s = 0; s < L.S; ++s)
    for (int f = 0; f < L.F; ++f) v(L.y(s, f)) = a.y(s, f);
  for (int e = 0; e < L.E; ++e) v(L.z(e)) = a.z(e);
  for (int s = 0; s < L.S; ++s)
    for (int f = 0; f < L.F; ++f) {
      const double r = m.cap_ratio(s, f);
      v(L.eps(s, f)) = std::max(0.0, r - std::min(r, m.cap_limit) * a.y(s, f));
    }
  return v;
}

/// Rounds y at 0.5, assigns each UE to its largest fractional x column that
/// still has pilot capacity (ties to the lower federation), then repairs z.
inline std::optional<Eigen::VectorXd> assignment_rounding(const AssignmentMilp& m, const Eigen::VectorXd& relax,
                                                          const std::vector<int>& ecsp_of_csp) {
  const auto& L = m.layout;
  Assignment a = Assignment::zeros(L.K, L.S, L.E, L.F);
  for (int s = 0; s < L.S; ++s) {
    int best = -1;
    for (int f = 0; f < L.F; ++f)
      if (relax(L.y(s, f)) >= 0.5 && (best < 0 || relax(L.y(s, f)) > relax(L.y(s, best)))) best = f;
    if (best >= 0) a.y(s, best) = 1;
  }
  std::vector<int> load(static_cast<std::size_t>(L.F), 0);
  for (int k = 0; k < L.K; ++k) {
    int best = -1;
    for (int f = 0; f < L.F; ++f) {
      if (load[static_cast<std::size_t>(f)] >= m.pilot_len) continue;
      if (best < 0 || relax(L.x(k, f)) > relax(L.x(k, best))) best = f;
    }
    if (best < 0) return std::nullopt;
    a.x(k, best) = 1;
    ++load[static_cast<std::size_t>(best)];
  }
  a.sync_ecsps(ecsp_of_csp);
  return encode_assignment(m, a);
}

struct AssignmentResult {
  MilpSolution milp;
  Assignment assignment;
  double slack_sum = 0.0;  // eps + eps_tilde, normalized units
};

inline AssignmentResult solve_assignment(const FederationProblem& p, const PowerAllocation& pw, double lambda,
                                         const MilpOptions& opt = {}) {
  const AssignmentMilp m = build_assignment_milp(p, pw, lambda);
  const auto& ecsp_of_csp = p.ecsp_of_csp;
  const MilpHeuristic heur = [&](const MilpInstance&, const Eigen::VectorXd& relax) {
    return assignment_rounding(m, relax, ecsp_of_csp);
  };
  AssignmentResult r;
  r.milp = solve_milp(m.milp, opt, heur);
  if (r.milp.has_incumbent) {
    r.assignment = decode_assignment(m, r.milp.values);
    const auto& L = m.layout;
    for (int k = 0; k < L.K; ++k)
      for (int f = 0; f < L.F; ++f) r.slack_sum += r.milp.values(L.eps_tilde(k, f));
    for (int s = 0; s < L.S; ++s)
      for (int f = 0; f < L.F; ++f) r.slack_sum += r.milp.values(L.eps(s, f));
  }
  return r;
}

}  // namespace cfed
