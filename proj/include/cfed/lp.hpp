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

// Dense bounded-variable revised simplex.
//
//   minimize c'x  subject to  A x (<=, =, >=) b,  lower <= x <= upper
//
// Every row gets a logical column whose bounds encode the row sense. Rows
// whose logical cannot absorb the starting residual receive an artificial
// column; phase one drives the artificials to zero. The basis inverse is kept
// explicitly, updated in product form and refactored periodically. Pricing is
// Dantzig's rule, falling back to Bland's rule after a run of degenerate
// pivots; the ratio test is Harris's two-pass variant.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfed/error.hpp"

namespace cfed {

enum class RowSense { le, eq, ge };

struct LpInstance {
  Eigen::VectorXd cost;
  Eigen::MatrixXd A;
  std::vector<RowSense> sense;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;  // may hold -inf
  Eigen::VectorXd upper;  // may hold +inf

  Eigen::Index num_vars() const { return cost.size(); }
  Eigen::Index num_rows() const { return A.rows(); }

  void validate() const {
    const auto n = num_vars();
    if (A.cols() != n && A.rows() > 0) throw ShapeError("lp: A must have one column per variable");
    if (rhs.size() != A.rows() || static_cast<Eigen::Index>(sense.size()) != A.rows())
      throw ShapeError("lp: rhs and senses must have one entry per row");
    if (lower.size() != n || upper.size() != n) throw ShapeError("lp: bounds must have one entry per variable");
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) > upper(j))
        throw ShapeError("lp: bounds must satisfy lower <= upper");
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_failure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    case LpStatus::numerical_failure: return "numerical-failure";
  }
  return "?";
}

struct LpOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_every = 100;
  int bland_after = 50;  // consecutive degenerate pivots before switching rule
  long max_iter = 0;     // 0: 50 (m + n) + 1000
};

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  Eigen::VectorXd values;
  double objective = 0.0;
  long iterations = 0;
};

namespace detail {

class RevisedSimplex {
 public:
  RevisedSimplex(const LpInstance& lp, const LpOptions& opt) : opt_(opt), n_(lp.num_vars()), m_(lp.num_rows()) {
    // Row equilibration: each row scaled to unit max-norm.
    Eigen::MatrixXd A = lp.A;
    b_ = lp.rhs;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double s = A.row(i).cwiseAbs().maxCoeff();
      if (s > 0) {
        A.row(i) /= s;
        b_(i) /= s;
      }
    }
    cost_orig_ = lp.cost;
    // Columns: structurals, logicals, then artificials (added below).
    cols_ = Eigen::MatrixXd::Zero(m_, n_ + 2 * m_);
    cols_.leftCols(n_) = A;
    cols_.middleCols(n_, m_).setIdentity();
    const double inf = std::numeric_limits<double>::infinity();
    lo_ = Eigen::VectorXd::Zero(n_ + 2 * m_);
    up_ = Eigen::VectorXd::Zero(n_ + 2 * m_);
    lo_.head(n_) = lp.lower;
    up_.head(n_) = lp.upper;
    for (Eigen::Index i = 0; i < m_; ++i) {
      switch (lp.sense[static_cast<std::size_t>(i)]) {
        case RowSense::le: lo_(n_ + i) = 0; up_(n_ + i) = inf; break;
        case RowSense::ge: lo_(n_ + i) = -inf; up_(n_ + i) = 0; break;
        case RowSense::eq: lo_(n_ + i) = 0; up_(n_ + i) = 0; break;
      }
    }
    x_ = Eigen::VectorXd::Zero(n_ + 2 * m_);
    for (Eigen::Index j = 0; j < n_; ++j) x_(j) = nonbasic_start(j);
    pos_.assign(static_cast<std::size_t>(n_ + 2 * m_), -1);
    basis_.assign(static_cast<std::size_t>(m_), -1);

    const Eigen::VectorXd r = b_ - A * x_.head(n_);
    Binv_ = Eigen::MatrixXd::Identity(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index slack = n_ + i;
      const Eigen::Index art = n_ + m_ + i;
      if (r(i) >= lo_(slack) - opt_.feas_tol && r(i) <= up_(slack) + opt_.feas_tol) {
        set_basic(i, slack);
        x_(slack) = r(i);
        lo_(art) = up_(art) = 0.0;  // unused artificial
      } else {
        const double sign = r(i) >= 0 ? 1.0 : -1.0;
        cols_(i, art) = sign;
        Binv_(i, i) = sign;
        x_(slack) = 0.0;
        set_basic(i, art);
        x_(art) = std::abs(r(i));
        lo_(art) = 0.0;
        up_(art) = inf;
        has_artificial_ = true;
      }
    }
  }

  LpSolution run() {
    LpSolution out;
    max_iter_ = opt_.max_iter > 0 ? opt_.max_iter : 50 * (m_ + n_) + 1000;
    if (has_artificial_) {
      Eigen::VectorXd c1 = Eigen::VectorXd::Zero(cols_.cols());
      c1.tail(m_).setOnes();
      const LpStatus st = iterate(c1);
      out.iterations = iters_;
      if (st != LpStatus::optimal) {
        out.status = st == LpStatus::unbounded ? LpStatus::numerical_failure : st;
        return out;
      }
      refactor();
      const double infeas = x_.tail(m_).sum();
      if (infeas > 1e-7 * std::max(1.0, b_.cwiseAbs().maxCoeff())) {
        out.status = LpStatus::infeasible;
        return out;
      }
      for (Eigen::Index i = 0; i < m_; ++i) {
        const Eigen::Index art = n_ + m_ + i;
        up_(art) = 0.0;
        lo_(art) = 0.0;
        if (pos_[static_cast<std::size_t>(art)] < 0) x_(art) = 0.0;
      }
    }
    Eigen::VectorXd c2 = Eigen::VectorXd::Zero(cols_.cols());
    c2.head(n_) = cost_orig_;
    LpStatus st = iterate(c2);
    out.iterations = iters_;
    if (st == LpStatus::optimal) {
      refactor();
      if (max_bound_violation() > 1e-6) st = LpStatus::numerical_failure;
    }
    out.status = st;
    if (st == LpStatus::optimal) {
      out.values = x_.head(n_);
      for (Eigen::Index j = 0; j < n_; ++j) out.values(j) = std::clamp(out.values(j), lo_(j), up_(j));
      out.objective = cost_orig_.dot(out.values);
    }
    return out;
  }

 private:
  double nonbasic_start(Eigen::Index j) const {
    if (std::isfinite(lo_(j))) return lo_(j);
    if (std::isfinite(up_(j))) return up_(j);
    return 0.0;
  }

  void set_basic(Eigen::Index row, Eigen::Index col) {
    const int old = basis_[static_cast<std::size_t>(row)];
    if (old >= 0) pos_[static_cast<std::size_t>(old)] = -1;
    basis_[static_cast<std::size_t>(row)] = static_cast<int>(col);
    pos_[static_cast<std::size_t>(col)] = static_cast<int>(row);
  }

  bool is_basic(Eigen::Index j) const { return pos_[static_cast<std::size_t>(j)] >= 0; }

  double max_bound_violation() const {
    double v = 0.0;
    for (Eigen::Index j = 0; j < cols_.cols(); ++j) v = std::max({v, lo_(j) - x_(j), x_(j) - up_(j)});
    return v;
  }

  void refactor() {
    Eigen::MatrixXd B(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = cols_.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Binv_ = lu.inverse();
    Eigen::VectorXd rhs = b_;
    for (Eigen::Index j = 0; j < cols_.cols(); ++j)
      if (!is_basic(j) && x_(j) != 0.0) rhs -= cols_.col(j) * x_(j);
    const Eigen::VectorXd xb = Binv_ * rhs;
    for (Eigen::Index i = 0; i < m_; ++i) x_(basis_[static_cast<std::size_t>(i)]) = xb(i);
    since_refactor_ = 0;
  }

  LpStatus iterate(const Eigen::VectorXd& c) {
    int degenerate_run = 0;
    while (true) {
      if (iters_ >= max_iter_) return LpStatus::iteration_limit;
      if (since_refactor_ >= opt_.refactor_every) refactor();
      Eigen::VectorXd cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb(i) = c(basis_[static_cast<std::size_t>(i)]);
      const Eigen::VectorXd pi = Binv_.transpose() * cb;
      const Eigen::VectorXd d = c - cols_.transpose() * pi;
      if (!d.allFinite()) return LpStatus::numerical_failure;

      const bool bland = degenerate_run > opt_.bland_after;
      Eigen::Index enter = -1;
      double enter_dir = 0.0, best = 0.0;
      for (Eigen::Index j = 0; j < cols_.cols(); ++j) {
        if (is_basic(j) || lo_(j) == up_(j)) continue;
        const bool can_up = x_(j) < up_(j) - opt_.feas_tol || !std::isfinite(up_(j));
        const bool can_down = x_(j) > lo_(j) + opt_.feas_tol || !std::isfinite(lo_(j));
        double dir = 0.0;
        if (d(j) < -opt_.opt_tol && can_up) dir = 1.0;
        if (d(j) > opt_.opt_tol && can_down) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (std::abs(d(j)) > best) {
          best = std::abs(d(j));
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      const Eigen::VectorXd alpha = Binv_ * cols_.col(enter);
      // Basic values move by -dir * alpha per unit step.
      const double inf = std::numeric_limits<double>::infinity();
      double tmax = inf;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double rate = -enter_dir * alpha(i);
        if (std::abs(alpha(i)) <= opt_.pivot_tol) continue;
        const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
        if (rate < 0 && std::isfinite(lo_(bj))) tmax = std::min(tmax, (x_(bj) - lo_(bj) + opt_.feas_tol) / -rate);
        if (rate > 0 && std::isfinite(up_(bj))) tmax = std::min(tmax, (up_(bj) - x_(bj) + opt_.feas_tol) / rate);
      }
      const double flip = up_(enter) - lo_(enter);
      if (!std::isfinite(tmax) && !std::isfinite(flip)) return LpStatus::unbounded;

      Eigen::Index leave = -1;
      double step = 0.0;
      if (flip <= tmax) {
        step = flip;
      } else {
        double best_piv = 0.0;
        for (Eigen::Index i = 0; i < m_; ++i) {
          const double rate = -enter_dir * alpha(i);
          if (std::abs(alpha(i)) <= opt_.pivot_tol) continue;
          const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
          double t = inf;
          if (rate < 0 && std::isfinite(lo_(bj))) t = (x_(bj) - lo_(bj)) / -rate;
          if (rate > 0 && std::isfinite(up_(bj))) t = (up_(bj) - x_(bj)) / rate;
          if (t > tmax) continue;
          const bool better = bland ? (leave < 0 || bj < basis_[static_cast<std::size_t>(leave)])
                                    : std::abs(alpha(i)) > best_piv;
          if (better) {
            best_piv = std::abs(alpha(i));
            leave = i;
            step = std::max(0.0, t);
          }
        }
        if (leave < 0) return LpStatus::numerical_failure;
      }

      x_(enter) += enter_dir * step;
      for (Eigen::Index i = 0; i < m_; ++i) x_(basis_[static_cast<std::size_t>(i)]) -= enter_dir * step * alpha(i);
      ++iters_;
      degenerate_run = step < 1e-12 ? degenerate_run + 1 : 0;
      if (leave < 0) continue;  // bound flip, basis unchanged

      const Eigen::Index out = basis_[static_cast<std::size_t>(leave)];
      const double rate = -enter_dir * alpha(leave);
      x_(out) = rate < 0 ? lo_(out) : up_(out);
      // Product-form update of the explicit inverse.
      const double piv = alpha(leave);
      const Eigen::RowVectorXd prow = Binv_.row(leave) / piv;
      for (Eigen::Index i = 0; i < m_; ++i)
        if (i != leave && alpha(i) != 0.0) Binv_.row(i) -= alpha(i) * prow;
      Binv_.row(leave) = prow;
      set_basic(leave, enter);
      ++since_refactor_;
    }
  }

  LpOptions opt_;
  Eigen::Index n_, m_;
  Eigen::MatrixXd cols_;
  Eigen::VectorXd b_, lo_, up_, x_, cost_orig_;
  Eigen::MatrixXd Binv_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  bool has_artificial_ = false;
  long iters_ = 0;
  long max_iter_ = 0;
  int since_refactor_ = 0;
};

}  // namespace detail

inline LpSolution solve_lp(const LpInstance& lp, const LpOptions& opt = {}) {
  lp.validate();
  detail::RevisedSimplex simplex(lp, opt);
  return simplex.run();
}

}  // namespace cfed
