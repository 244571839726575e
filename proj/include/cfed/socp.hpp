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

// Dense primal-dual interior-point solver for second-order cone programs.
//
//   minimize    f'v
//   subject to  ||A_i v + b_i||_2 <= c_i'v + d_i      (cone constraints)
//               L v <= u                               (linear inequalities)
//               lower <= v <= upper
//
// The instance is rewritten in conic form G v + s = h, s in K, where K is a
// product of a nonnegative orthant and second-order cones, and solved on the
// homogeneous self-dual embedding with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector. The embedding yields either an optimal pair or an
// infeasibility certificate without a phase-one problem.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfed/error.hpp"

namespace cfed {

/// ||A v + b||_2 <= c'v + d.
struct ConeConstraint {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double d = 0.0;
};

struct SocpInstance {
  Eigen::VectorXd objective;
  std::vector<ConeConstraint> cones;
  Eigen::MatrixXd ineq_A;  // ineq_A v <= ineq_b
  Eigen::VectorXd ineq_b;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index num_vars() const { return objective.size(); }

  void validate() const {
    const auto n = num_vars();
    if (lower.size() != n || upper.size() != n) throw ShapeError("socp: bound vectors must match objective");
    for (Eigen::Index j = 0; j < n; ++j)
      if (!std::isfinite(lower(j)) || !std::isfinite(upper(j)) || lower(j) > upper(j))
        throw ShapeError("socp: bounds must be finite with lower <= upper");
    if (ineq_A.rows() != ineq_b.size() || (ineq_A.rows() > 0 && ineq_A.cols() != n))
      throw ShapeError("socp: inequality block has inconsistent dimensions");
    for (const auto& k : cones)
      if (k.A.cols() != n || k.A.rows() != k.b.size() || k.c.size() != n)
        throw ShapeError("socp: cone constraint has inconsistent dimensions");
  }
};

enum class SocpStatus { optimal, infeasible, unbounded, max_iter, numerical_failure };

inline const char* to_string(SocpStatus s) {
  switch (s) {
    case SocpStatus::optimal: return "optimal";
    case SocpStatus::infeasible: return "infeasible";
    case SocpStatus::unbounded: return "unbounded";
    case SocpStatus::max_iter: return "max-iter";
    case SocpStatus::numerical_failure: return "numerical-failure";
  }
  return "?";
}

struct SocpOptions {
  int max_iter = 100;
  double feastol = 1e-9;
  double abstol = 1e-10;
  double reltol = 1e-8;
  double step_fraction = 0.99;
};

struct SocpSolution {
  Eigen::VectorXd values;
  double objective = 0.0;
  SocpStatus status = SocpStatus::numerical_failure;
  double kkt_residual = std::numeric_limits<double>::infinity();
  double primal_residual = std::numeric_limits<double>::infinity();
  double dual_residual = std::numeric_limits<double>::infinity();
  double relative_gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

namespace detail {

/// Cone layout: `lp` orthant rows first, then second-order blocks.
struct ConeLayout {
  int lp = 0;
  std::vector<int> soc;
  std::vector<int> offset;  // start row of each SOC block
  int rows = 0;

  int degree() const { return lp + static_cast<int>(soc.size()); }
};

struct ConicForm {
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  ConeLayout layout;
};

inline ConicForm to_conic(const SocpInstance& in) {
  const auto n = in.num_vars();
  ConicForm cf;
  cf.c = in.objective;
  int lp = static_cast<int>(in.ineq_A.rows()) + 2 * static_cast<int>(n);
  int rows = lp;
  for (const auto& k : in.cones) {
    cf.layout.offset.push_back(rows);
    cf.layout.soc.push_back(static_cast<int>(k.A.rows()) + 1);
    rows += static_cast<int>(k.A.rows()) + 1;
  }
  cf.layout.lp = lp;
  cf.layout.rows = rows;
  cf.G = Eigen::MatrixXd::Zero(rows, n);
  cf.h = Eigen::VectorXd::Zero(rows);
  int r = 0;
  if (in.ineq_A.rows() > 0) {
    cf.G.topRows(in.ineq_A.rows()) = in.ineq_A;
    cf.h.head(in.ineq_A.rows()) = in.ineq_b;
    r += static_cast<int>(in.ineq_A.rows());
  }
  for (Eigen::Index j = 0; j < n; ++j, ++r) {  // v_j <= upper_j
    cf.G(r, j) = 1.0;
    cf.h(r) = in.upper(j);
  }
  for (Eigen::Index j = 0; j < n; ++j, ++r) {  // -v_j <= -lower_j
    cf.G(r, j) = -1.0;
    cf.h(r) = -in.lower(j);
  }
  for (const auto& k : in.cones) {
    cf.G.row(r) = -k.c.transpose();
    cf.h(r) = k.d;
    ++r;
    cf.G.middleRows(r, k.A.rows()) = -k.A;
    cf.h.segment(r, k.b.size()) = k.b;
    r += static_cast<int>(k.A.rows());
  }
  return cf;
}

/// Nesterov-Todd scaling W with W z = W^{-1} s = lambda.
class NtScaling {
 public:
  NtScaling(const ConeLayout& layout, const Eigen::VectorXd& s, const Eigen::VectorXd& z) : layout_(&layout) {
    const int l = layout.lp;
    lp_w_ = (s.head(l).array() / z.head(l).array()).sqrt();
    lambda_.resize(layout.rows);
    lambda_.head(l) = (s.head(l).array() * z.head(l).array()).sqrt();
    eta_.resize(layout.soc.size());
    wbar_.resize(layout.soc.size());
    for (std::size_t i = 0; i < layout.soc.size(); ++i) {
      const int o = layout.offset[i], q = layout.soc[i];
      const auto sb = s.segment(o, q);
      const auto zb = z.segment(o, q);
      const double sres = sb(0) * sb(0) - sb.tail(q - 1).squaredNorm();
      const double zres = zb(0) * zb(0) - zb.tail(q - 1).squaredNorm();
      const double snorm = std::sqrt(std::max(sres, 1e-300));
      const double znorm = std::sqrt(std::max(zres, 1e-300));
      const Eigen::VectorXd sn = sb / snorm;
      const Eigen::VectorXd zn = zb / znorm;
      const double gam = std::sqrt(std::max((1.0 + sn.dot(zn)) / 2.0, 1e-300));
      Eigen::VectorXd w(q);
      w(0) = (sn(0) + zn(0)) / (2.0 * gam);
      w.tail(q - 1) = (sn.tail(q - 1) - zn.tail(q - 1)) / (2.0 * gam);
      eta_[i] = std::sqrt(snorm / znorm);
      wbar_[i] = std::move(w);
    }
    for (std::size_t i = 0; i < layout.soc.size(); ++i) {
      const int o = layout.offset[i], q = layout.soc[i];
      lambda_.segment(o, q) = apply_block(i, z.segment(o, q), false);
    }
  }

  const Eigen::VectorXd& lambda() const { return lambda_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& v, bool inverse) const {
    Eigen::VectorXd out(v.size());
    const int l = layout_->lp;
    if (inverse)
      out.head(l) = v.head(l).array() / lp_w_.array();
    else
      out.head(l) = v.head(l).array() * lp_w_.array();
    for (std::size_t i = 0; i < layout_->soc.size(); ++i) {
      const int o = layout_->offset[i], q = layout_->soc[i];
      out.segment(o, q) = apply_block(i, v.segment(o, q), inverse);
    }
    return out;
  }

  /// W^{-1} applied to every column of G.
  Eigen::MatrixXd scale_columns_inverse(const Eigen::MatrixXd& G) const {
    Eigen::MatrixXd H(G.rows(), G.cols());
    const int l = layout_->lp;
    H.topRows(l) = lp_w_.cwiseInverse().asDiagonal() * G.topRows(l);
    for (std::size_t i = 0; i < layout_->soc.size(); ++i) {
      const int o = layout_->offset[i], q = layout_->soc[i];
      const auto& w = wbar_[i];
      const auto w1 = w.tail(q - 1);
      const auto X0 = G.row(o);
      const auto X1 = G.middleRows(o + 1, q - 1);
      const Eigen::RowVectorXd wtx = w1.transpose() * X1;
      const double inv_eta = 1.0 / eta_[i];
      H.row(o) = inv_eta * (w(0) * X0 - wtx);
      const Eigen::RowVectorXd coef = -X0 + wtx / (1.0 + w(0));
      H.middleRows(o + 1, q - 1) = inv_eta * (X1 + w1 * coef);
    }
    return H;
  }

 private:
  template <typename V>
  Eigen::VectorXd apply_block(std::size_t i, const V& v, bool inverse) const {
    const auto& w = wbar_[i];
    const Eigen::Index q = w.size();
    const auto w1 = w.tail(q - 1);
    const double w1v1 = w1.dot(v.tail(q - 1));
    Eigen::VectorXd out(q);
    if (!inverse) {
      out(0) = eta_[i] * (w(0) * v(0) + w1v1);
      out.tail(q - 1) = eta_[i] * (v.tail(q - 1) + (v(0) + w1v1 / (1.0 + w(0))) * w1);
    } else {
      out(0) = (w(0) * v(0) - w1v1) / eta_[i];
      out.tail(q - 1) = (v.tail(q - 1) + (-v(0) + w1v1 / (1.0 + w(0))) * w1) / eta_[i];
    }
    return out;
  }

  const ConeLayout* layout_;
  Eigen::VectorXd lp_w_;
  Eigen::VectorXd lambda_;
  std::vector<double> eta_;
  std::vector<Eigen::VectorXd> wbar_;
};

/// Jordan product u o v.
inline Eigen::VectorXd jordan_product(const ConeLayout& L, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(u.size());
  out.head(L.lp) = u.head(L.lp).cwiseProduct(v.head(L.lp));
  for (std::size_t i = 0; i < L.soc.size(); ++i) {
    const int o = L.offset[i], q = L.soc[i];
    out(o) = u.segment(o, q).dot(v.segment(o, q));
    out.segment(o + 1, q - 1) = u(o) * v.segment(o + 1, q - 1) + v(o) * u.segment(o + 1, q - 1);
  }
  return out;
}

/// Solves lambda o x = v for x.
inline Eigen::VectorXd jordan_divide(const ConeLayout& L, const Eigen::VectorXd& lam, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  out.head(L.lp) = v.head(L.lp).cwiseQuotient(lam.head(L.lp));
  for (std::size_t i = 0; i < L.soc.size(); ++i) {
    const int o = L.offset[i], q = L.soc[i];
    const double l0 = lam(o);
    const auto l1 = lam.segment(o + 1, q - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double x0 = (l0 * v(o) - l1.dot(v.segment(o + 1, q - 1))) / det;
    out(o) = x0;
    out.segment(o + 1, q - 1) = (v.segment(o + 1, q - 1) - x0 * l1) / l0;
  }
  return out;
}

inline Eigen::VectorXd cone_identity(const ConeLayout& L) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(L.rows);
  e.head(L.lp).setOnes();
  for (int o : L.offset) e(o) = 1.0;
  return e;
}

/// Largest alpha with v + alpha dv in the cone (infinity when unbounded).
inline double max_step(const ConeLayout& L, const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < L.lp; ++i)
    if (dv(i) < 0) alpha = std::min(alpha, -v(i) / dv(i));
  for (std::size_t i = 0; i < L.soc.size(); ++i) {
    const int o = L.offset[i], q = L.soc[i];
    const auto v1 = v.segment(o + 1, q - 1);
    const auto d1 = dv.segment(o + 1, q - 1);
    const double a = dv(o) * dv(o) - d1.squaredNorm();
    const double b = v(o) * dv(o) - v1.dot(d1);
    const double c = std::max(v(o) * v(o) - v1.squaredNorm(), 0.0);
    // f(t) = a t^2 + 2 b t + c; first positive root bounds the step.
    double root = std::numeric_limits<double>::infinity();
    const double disc = b * b - a * c;
    if (std::abs(a) < 1e-300) {
      if (b < 0) root = -c / (2.0 * b);
    } else if (disc >= 0) {
      const double sq = std::sqrt(disc);
      const double qq = -(b + (b >= 0 ? sq : -sq));
      double r1 = qq / a;
      double r2 = (qq != 0.0) ? c / qq : std::numeric_limits<double>::infinity();
      if (r1 > r2) std::swap(r1, r2);
      if (r1 > 0)
        root = r1;
      else if (r2 > 0)
        root = r2;
    }
    if (dv(o) < 0) root = std::min(root, -v(o) / dv(o));
    alpha = std::min(alpha, root);
  }
  return alpha;
}

/// Smallest t such that v + t e is in the cone (negative when interior).
inline double interior_margin(const ConeLayout& L, const Eigen::VectorXd& v) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < L.lp; ++i) worst = std::max(worst, -v(i));
  for (std::size_t i = 0; i < L.soc.size(); ++i) {
    const int o = L.offset[i], q = L.soc[i];
    worst = std::max(worst, v.segment(o + 1, q - 1).norm() - v(o));
  }
  return worst;
}

inline void push_interior(const ConeLayout& L, Eigen::VectorXd& v) {
  const double m = interior_margin(L, v);
  if (m >= 0) v += (1.0 + m) * cone_identity(L);
}

/// Factorization of G'W^{-2}G used for every Newton solve of one iteration.
class KktSolver {
 public:
  KktSolver(const Eigen::MatrixXd& G, const NtScaling* scaling) : G_(G), W_(scaling) {
    H_ = scaling ? scaling->scale_columns_inverse(G) : G;
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(G.cols(), G.cols());
    N.selfadjointView<Eigen::Lower>().rankUpdate(H_.transpose());
    N.triangularView<Eigen::Upper>() = N.transpose();
    // Regularize only when the plain factorization breaks down.
    const double scale = std::max(1.0, N.diagonal().cwiseAbs().maxCoeff());
    for (double reg : {0.0, 1e-14, 1e-11, 1e-8}) {
      llt_.compute(N + Eigen::MatrixXd::Identity(N.rows(), N.cols()) * (reg * scale));
      if (llt_.info() == Eigen::Success) {
        ok_ = true;
        break;
      }
    }
  }

  bool ok() const { return ok_; }

  /// Solves G'dz = r1, G dx - W^2 dz = r2 with two refinement sweeps.
  void solve(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& dx, Eigen::VectorXd& dz) const {
    raw_solve(r1, r2, dx, dz);
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 5; ++it) {
      const Eigen::VectorXd e1 = r1 - G_.transpose() * dz;
      const Eigen::VectorXd e2 = r2 - (G_ * dx - w_squared(dz));
      const double err = std::max(e1.lpNorm<Eigen::Infinity>(), e2.lpNorm<Eigen::Infinity>());
      if (!(err < 0.5 * last)) break;
      last = err;
      Eigen::VectorXd cx, cz;
      raw_solve(e1, e2, cx, cz);
      dx += cx;
      dz += cz;
    }
  }

 private:
  Eigen::VectorXd w_inverse(const Eigen::VectorXd& v) const { return W_ ? W_->apply(v, true) : v; }
  Eigen::VectorXd w_squared(const Eigen::VectorXd& v) const { return W_ ? W_->apply(W_->apply(v, false), false) : v; }

  void raw_solve(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& dx,
                 Eigen::VectorXd& dz) const {
    const Eigen::VectorXd wr2 = w_inverse(r2);
    dx = llt_.solve(r1 + H_.transpose() * wr2);
    dz = w_inverse(H_ * dx - wr2);
  }

  const Eigen::MatrixXd& G_;
  const NtScaling* W_;
  Eigen::MatrixXd H_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool ok_ = false;
};

}  // namespace detail

inline SocpSolution solve_socp(const SocpInstance& instance, const SocpOptions& opt = {}) {
  using Eigen::VectorXd;
  instance.validate();
  const detail::ConicForm cf = detail::to_conic(instance);
  const auto& L = cf.layout;
  const auto& G = cf.G;
  const auto& h = cf.h;
  const auto& c = cf.c;
  const Eigen::Index n = instance.num_vars();
  const double nu = L.degree();
  const VectorXd e = detail::cone_identity(L);
  const double hnorm = std::max(1.0, h.norm());
  const double cnorm = std::max(1.0, c.norm());

  SocpSolution out;
  out.values = VectorXd::Zero(n);

  // Least-squares starting point pushed into the cone interior.
  VectorXd x, s, z;
  {
    detail::KktSolver ls(G, nullptr);
    if (!ls.ok()) return out;
    VectorXd dz;
    ls.solve(VectorXd::Zero(n), h, x, dz);  // min ||G x - h||: G'(G x - h) = 0
    s = -dz;
    VectorXd tmp;
    ls.solve(-c, VectorXd::Zero(L.rows), tmp, z);  // min ||z|| s.t. G'z = -c
    detail::push_interior(L, s);
    detail::push_interior(L, z);
  }
  double tau = 1.0, kappa = 1.0;

  auto finish = [&](SocpStatus st, int iters) {
    out.status = st;
    out.iterations = iters;
    if (tau > 0) out.values = x / tau;
    out.objective = c.dot(out.values);
    return out;
  };

  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    const VectorXd rx = G.transpose() * z + c * tau;
    const VectorXd rz = s + G * x - h * tau;
    const double cx = c.dot(x), hz = h.dot(z);
    const double rt = kappa + cx + hz;

    const double pres = rz.norm() / tau / hnorm;
    const double dres = rx.norm() / tau / cnorm;
    const double pcost = cx / tau, dcost = -hz / tau;
    const double gap = s.dot(z) / (tau * tau);
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0)
      relgap = gap / -pcost;
    else if (dcost > 0)
      relgap = gap / dcost;
    out.primal_residual = pres;
    out.dual_residual = dres;
    out.relative_gap = relgap;
    out.kkt_residual = std::max({pres, dres, std::min(gap, relgap)});

    if (!std::isfinite(pres) || !std::isfinite(dres) || !std::isfinite(gap)) return finish(SocpStatus::numerical_failure, iter);
    if (pres < opt.feastol && dres < opt.feastol && (gap < opt.abstol || relgap < opt.reltol))
      return finish(SocpStatus::optimal, iter);
    if (hz < 0 && (G.transpose() * z).norm() / -hz < opt.feastol) {
      out.status = SocpStatus::infeasible;
      out.iterations = iter;
      out.values = VectorXd::Zero(n);
      out.objective = std::numeric_limits<double>::infinity();
      return out;
    }
    if (cx < 0 && (G * x + s).norm() / -cx < opt.feastol) {
      out.status = SocpStatus::unbounded;
      out.iterations = iter;
      return out;
    }
    if (iter == opt.max_iter) break;

    const double mu = (s.dot(z) + tau * kappa) / (nu + 1.0);
    const detail::NtScaling W(L, s, z);
    const VectorXd& lam = W.lambda();
    const detail::KktSolver kkt(G, &W);
    if (!kkt.ok()) return finish(SocpStatus::numerical_failure, iter);

    VectorXd x1, z1;
    kkt.solve(-c, h, x1, z1);
    const double denom_base = c.dot(x1) + h.dot(z1) - kappa / tau;

    // Solves the embedded Newton system for a complementarity target.
    auto direction = [&](double resid_scale, const VectorXd& ds_target, double dk_target, VectorXd& dx, VectorXd& ds,
                         VectorXd& dz, double& dtau, double& dkappa) {
      const VectorXd lds = detail::jordan_divide(L, lam, ds_target);
      VectorXd x2, z2;
      kkt.solve(-resid_scale * rx, -resid_scale * rz - W.apply(lds, false), x2, z2);
      dtau = (-resid_scale * rt - dk_target / tau - c.dot(x2) - h.dot(z2)) / denom_base;
      dx = x2 + dtau * x1;
      dz = z2 + dtau * z1;
      ds = W.apply(lds - W.apply(dz, false), false);
      dkappa = (dk_target - kappa * dtau) / tau;
    };
    auto step_to_boundary = [&](const VectorXd& ds, const VectorXd& dz, double dtau, double dkappa) {
      double a = std::min(detail::max_step(L, s, ds), detail::max_step(L, z, dz));
      if (dtau < 0) a = std::min(a, -tau / dtau);
      if (dkappa < 0) a = std::min(a, -kappa / dkappa);
      return a;
    };

    // Predictor.
    VectorXd dx_a, ds_a, dz_a;
    double dtau_a = 0, dkappa_a = 0;
    const VectorXd lam_sq = detail::jordan_product(L, lam, lam);
    direction(1.0, -lam_sq, -tau * kappa, dx_a, ds_a, dz_a, dtau_a, dkappa_a);
    const double alpha_a = std::min(1.0, step_to_boundary(ds_a, dz_a, dtau_a, dkappa_a));
    const double sigma = std::clamp(std::pow(1.0 - alpha_a, 3), 0.0, 1.0);

    // Corrector.
    const VectorXd second = detail::jordan_product(L, W.apply(ds_a, true), W.apply(dz_a, false));
    const VectorXd ds_t = -lam_sq - second + sigma * mu * e;
    const double dk_t = -tau * kappa - dtau_a * dkappa_a + sigma * mu;
    VectorXd dx, ds, dz;
    double dtau = 0, dkappa = 0;
    direction(1.0 - sigma, ds_t, dk_t, dx, ds, dz, dtau, dkappa);
    const double alpha = std::min(1.0, opt.step_fraction * step_to_boundary(ds, dz, dtau, dkappa));
    if (!(alpha > 0) || !std::isfinite(alpha)) return finish(SocpStatus::numerical_failure, iter);

    x += alpha * dx;
    s += alpha * ds;
    z += alpha * dz;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
    if (!x.allFinite() || !s.allFinite() || !z.allFinite() || !std::isfinite(tau) || !std::isfinite(kappa))
      return finish(SocpStatus::numerical_failure, iter);
  }
  return finish(SocpStatus::max_iter, opt.max_iter);
}

// Plain-text dump: sizes line, then objective, bounds, inequalities and cones,
// one row per line, values printed with 17 significant digits.

inline void write_socp_text(std::ostream& os, const SocpInstance& in) {
  auto row = [&](const auto& v) {
    char buf[32];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", v(i));
      os << (i ? " " : "") << buf;
    }
    os << '\n';
  };
  os << "socp " << in.num_vars() << ' ' << in.ineq_A.rows() << ' ' << in.cones.size() << '\n';
  os << "objective\n";
  row(in.objective);
  os << "lower\n";
  row(in.lower);
  os << "upper\n";
  row(in.upper);
  os << "ineq\n";
  for (Eigen::Index r = 0; r < in.ineq_A.rows(); ++r) {
    row(Eigen::VectorXd(in.ineq_A.row(r).transpose()));
  }
  row(in.ineq_b);
  for (const auto& k : in.cones) {
    os << "cone " << k.A.rows() << '\n';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", k.d);
    os << buf << '\n';
    row(k.c);
    for (Eigen::Index r = 0; r < k.A.rows(); ++r) row(Eigen::VectorXd(k.A.row(r).transpose()));
    row(k.b);
  }
}

inline SocpInstance read_socp_text(std::istream& is) {
  std::string tag;
  Eigen::Index n = 0, m = 0;
  std::size_t ncones = 0;
  if (!(is >> tag >> n >> m >> ncones) || tag != "socp") throw Error("socp text: bad header");
  auto read_vec = [&](Eigen::Index len) {
    Eigen::VectorXd v(len);
    for (Eigen::Index i = 0; i < len; ++i)
      if (!(is >> v(i))) throw Error("socp text: truncated vector");
    return v;
  };
  auto expect = [&](const char* want) {
    if (!(is >> tag) || tag != want) throw Error(std::string("socp text: expected ") + want);
  };
  SocpInstance in;
  expect("objective");
  in.objective = read_vec(n);
  expect("lower");
  in.lower = read_vec(n);
  expect("upper");
  in.upper = read_vec(n);
  expect("ineq");
  in.ineq_A.resize(m, n);
  for (Eigen::Index r = 0; r < m; ++r) in.ineq_A.row(r) = read_vec(n).transpose();
  in.ineq_b = read_vec(m);
  for (std::size_t i = 0; i < ncones; ++i) {
    expect("cone");
    Eigen::Index rows = 0;
    is >> rows;
    ConeConstraint k;
    is >> k.d;
    k.c = read_vec(n);
    k.A.resize(rows, n);
    for (Eigen::Index r = 0; r < rows; ++r) k.A.row(r) = read_vec(n).transpose();
    k.b = read_vec(rows);
    in.cones.push_back(std::move(k));
  }
  return in;
}

}  // namespace cfed
