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

// Best-first branch-and-bound over binary variables on top of solve_lp.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfed/error.hpp"
#include "cfed/lp.hpp"

namespace cfed {

struct MilpInstance {
  LpInstance lp;
  std::vector<int> integer_vars;  // binary

  void validate() const {
    lp.validate();
    for (int j : integer_vars) {
      if (j < 0 || j >= lp.num_vars()) throw ShapeError("milp: integer index out of range");
      if (lp.lower(j) < 0 || lp.upper(j) > 1) throw ShapeError("milp: integer variables must have bounds within [0, 1]");
    }
  }
};

enum class MilpStatus { optimal, infeasible, node_limit };

inline const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::node_limit: return "node-limit";
  }
  return "?";
}

struct MilpOptions {
  long node_limit = 200000;
  double gap_tol = 1e-6;
  double int_tol = 1e-6;
  double feas_tol = 1e-7;  // row residual accepted from heuristic candidates
  LpOptions lp;
};

struct MilpSolution {
  Eigen::VectorXd values;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  MilpStatus status = MilpStatus::infeasible;
  double gap = std::numeric_limits<double>::infinity();
  long nodes_explored = 0;
  bool has_incumbent = false;
  std::vector<double> incumbent_history;
  std::vector<double> bound_history;
};

/// Proposes an integral point from a node's relaxation; candidates are checked
/// against the instance before they can become the incumbent.
using MilpHeuristic = std::function<std::optional<Eigen::VectorXd>(const MilpInstance&, const Eigen::VectorXd&)>;

inline bool milp_point_feasible(const MilpInstance& in, const Eigen::VectorXd& v, double feas_tol, double int_tol) {
  const auto& lp = in.lp;
  if (v.size() != lp.num_vars() || !v.allFinite()) return false;
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (v(j) < lp.lower(j) - feas_tol || v(j) > lp.upper(j) + feas_tol) return false;
  for (int j : in.integer_vars)
    if (std::abs(v(j) - std::round(v(j))) > int_tol) return false;
  const Eigen::VectorXd ax = lp.A * v;
  for (Eigen::Index i = 0; i < lp.num_rows(); ++i) {
    const double scale = std::max(1.0, lp.A.row(i).cwiseAbs().maxCoeff());
    const double r = (ax(i) - lp.rhs(i)) / scale;
    switch (lp.sense[static_cast<std::size_t>(i)]) {
      case RowSense::le: if (r > feas_tol) return false; break;
      case RowSense::ge: if (r < -feas_tol) return false; break;
      case RowSense::eq: if (std::abs(r) > feas_tol) return false; break;
    }
  }
  return true;
}

/// Rounds the integer variables, fixes them and re-solves for the rest.
inline std::optional<Eigen::VectorXd> rounding_heuristic(const MilpInstance& in, const Eigen::VectorXd& relax) {
  LpInstance fixed = in.lp;
  for (int j : in.integer_vars) {
    const double r = std::clamp(std::round(relax(j)), in.lp.lower(j), in.lp.upper(j));
    fixed.lower(j) = fixed.upper(j) = r;
  }
  const LpSolution s = solve_lp(fixed);
  if (s.status != LpStatus::optimal) return std::nullopt;
  return s.values;
}

inline MilpSolution solve_milp(const MilpInstance& in, const MilpOptions& opt = {},
                               const MilpHeuristic& heuristic = rounding_heuristic) {
  in.validate();
  struct Node {
    double bound;
    long id;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.id > b.id;
    }
  };
  std::priority_queue<Node, std::vector<Node>, Later> open;
  MilpSolution out;
  long next_id = 0;
  open.push({-std::numeric_limits<double>::infinity(), next_id++, in.lp.lower, in.lp.upper});

  auto gap_of = [](double inc, double bound) { return (inc - bound) / std::max(1.0, std::abs(inc)); };
  auto offer = [&](const Eigen::VectorXd& v) {
    if (!milp_point_feasible(in, v, opt.feas_tol, opt.int_tol)) return;
    Eigen::VectorXd clean = v;
    for (int j : in.integer_vars) clean(j) = std::round(clean(j));
    const double obj = in.lp.cost.dot(clean);
    if (obj < out.objective) {
      out.objective = obj;
      out.values = std::move(clean);
      out.has_incumbent = true;
    }
  };

  bool exhausted = true;
  while (!open.empty()) {
    const double global_bound = open.top().bound;
    if (out.has_incumbent && gap_of(out.objective, global_bound) <= opt.gap_tol) break;
    if (out.nodes_explored >= opt.node_limit) {
      exhausted = false;
      break;
    }
    Node node = open.top();
    open.pop();
    ++out.nodes_explored;

    LpInstance relax = in.lp;
    relax.lower = node.lower;
    relax.upper = node.upper;
    const LpSolution ls = solve_lp(relax, opt.lp);
    if (ls.status == LpStatus::optimal && !(out.has_incumbent && gap_of(out.objective, ls.objective) <= opt.gap_tol)) {
      int branch = -1;
      double best_frac = -1.0;
      for (int j : in.integer_vars) {
        const double frac = std::abs(ls.values(j) - std::round(ls.values(j)));
        if (frac <= opt.int_tol) continue;
        const double score = 0.5 - std::abs(ls.values(j) - std::floor(ls.values(j)) - 0.5);
        if (score > best_frac + 1e-12) {
          best_frac = score;
          branch = j;
        }
      }
      if (branch < 0) {
        offer(ls.values);
      } else {
        if (heuristic) {
          if (auto cand = heuristic(in, ls.values)) offer(*cand);
        }
        Node down{ls.objective, next_id++, node.lower, node.upper};
        down.upper(branch) = std::floor(ls.values(branch));
        Node up{ls.objective, next_id++, std::move(node.lower), std::move(node.upper)};
        up.lower(branch) = std::ceil(ls.values(branch));
        open.push(std::move(down));
        open.push(std::move(up));
      }
    }
    const double b = open.empty() ? (out.has_incumbent ? out.objective : std::numeric_limits<double>::infinity())
                                  : std::min(open.top().bound, out.has_incumbent ? out.objective
                                                                                  : std::numeric_limits<double>::infinity());
    out.bound = std::max(out.bound, b);
    out.incumbent_history.push_back(out.objective);
    out.bound_history.push_back(out.bound);
  }

  if (out.has_incumbent) {
    if (open.empty()) out.bound = out.objective;
    out.bound = std::min(out.bound, out.objective);
    out.gap = std::max(0.0, gap_of(out.objective, out.bound));
    out.status = (exhausted || out.gap <= opt.gap_tol) ? MilpStatus::optimal : MilpStatus::node_limit;
  } else {
    out.status = exhausted ? MilpStatus::infeasible : MilpStatus::node_limit;
  }
  return out;
}

// Sparse triplet text format:
//   milp <vars> <rows> <nnz>
//   var <j> <cost> <lower> <upper> <int 0|1>
//   row <i> <L|E|G> <rhs>
//   a <i> <j> <value>

inline void write_milp_text(std::ostream& os, const MilpInstance& in) {
  const auto& lp = in.lp;
  std::vector<char> is_int(static_cast<std::size_t>(lp.num_vars()), 0);
  for (int j : in.integer_vars) is_int[static_cast<std::size_t>(j)] = 1;
  long nnz = 0;
  for (Eigen::Index i = 0; i < lp.A.rows(); ++i)
    for (Eigen::Index j = 0; j < lp.A.cols(); ++j)
      if (lp.A(i, j) != 0.0) ++nnz;
  char buf[160];
  os << "milp " << lp.num_vars() << ' ' << lp.num_rows() << ' ' << nnz << '\n';
  for (Eigen::Index j = 0; j < lp.num_vars(); ++j) {
    std::snprintf(buf, sizeof buf, "var %ld %.17g %.17g %.17g %d\n", static_cast<long>(j), lp.cost(j), lp.lower(j),
                  lp.upper(j), is_int[static_cast<std::size_t>(j)]);
    os << buf;
  }
  for (Eigen::Index i = 0; i < lp.num_rows(); ++i) {
    const char s = lp.sense[static_cast<std::size_t>(i)] == RowSense::le   ? 'L'
                   : lp.sense[static_cast<std::size_t>(i)] == RowSense::eq ? 'E'
                                                                           : 'G';
    std::snprintf(buf, sizeof buf, "row %ld %c %.17g\n", static_cast<long>(i), s, lp.rhs(i));
    os << buf;
  }
  for (Eigen::Index i = 0; i < lp.A.rows(); ++i)
    for (Eigen::Index j = 0; j < lp.A.cols(); ++j)
      if (lp.A(i, j) != 0.0) {
        std::snprintf(buf, sizeof buf, "a %ld %ld %.17g\n", static_cast<long>(i), static_cast<long>(j), lp.A(i, j));
        os << buf;
      }
}

inline MilpInstance read_milp_text(std::istream& is) {
  std::string tag;
  long n = 0, m = 0, nnz = 0;
  if (!(is >> tag >> n >> m >> nnz) || tag != "milp") throw Error("milp text: bad header");
  MilpInstance in;
  auto& lp = in.lp;
  lp.cost = Eigen::VectorXd::Zero(n);
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Zero(n);
  lp.A = Eigen::MatrixXd::Zero(m, n);
  lp.rhs = Eigen::VectorXd::Zero(m);
  lp.sense.assign(static_cast<std::size_t>(m), RowSense::le);
  auto num = [&]() {
    std::string t;
    if (!(is >> t)) throw Error("milp text: truncated");
    return std::stod(t);  // accepts inf / -inf
  };
  for (long k = 0; k < n; ++k) {
    long j = 0;
    int integer = 0;
    if (!(is >> tag >> j) || tag != "var" || j < 0 || j >= n) throw Error("milp text: bad var line");
    lp.cost(j) = num();
    lp.lower(j) = num();
    lp.upper(j) = num();
    is >> integer;
    if (integer) in.integer_vars.push_back(static_cast<int>(j));
  }
  for (long k = 0; k < m; ++k) {
    long i = 0;
    char s = 'L';
    if (!(is >> tag >> i >> s) || tag != "row" || i < 0 || i >= m) throw Error("milp text: bad row line");
    lp.sense[static_cast<std::size_t>(i)] = s == 'L' ? RowSense::le : s == 'E' ? RowSense::eq : RowSense::ge;
    lp.rhs(i) = num();
  }
  for (long k = 0; k < nnz; ++k) {
    long i = 0, j = 0;
    if (!(is >> tag >> i >> j) || tag != "a" || i < 0 || i >= m || j < 0 || j >= n)
      throw Error("milp text: bad coefficient line");
    lp.A(i, j) = num();
  }
  return in;
}

}  // namespace cfed
