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

#include <vector>

#include <Eigen/Dense>

namespace cfed {

/// Binary decisions: x(k, f) UE k in federation f, y(s, f) CSP s active in
/// federation f, z(e) ECSP e powered.
struct Assignment {
  Eigen::MatrixXi x;
  Eigen::MatrixXi y;
  Eigen::VectorXi z;

  static Assignment zeros(int ues, int csps, int ecsps, int federations) {
    return {Eigen::MatrixXi::Zero(ues, federations), Eigen::MatrixXi::Zero(csps, federations),
            Eigen::VectorXi::Zero(ecsps)};
  }

  int num_ues() const { return static_cast<int>(x.rows()); }
  int num_csps() const { return static_cast<int>(y.rows()); }
  int num_federations() const { return static_cast<int>(x.cols()); }

  int active_csps() const { return y.sum(); }
  int active_ecsps() const { return z.sum(); }

  /// First federation holding UE k, or -1.
  int federation_of_ue(int k) const {
    for (int f = 0; f < x.cols(); ++f)
      if (x(k, f) != 0) return f;
    return -1;
  }
  int federation_of_csp(int s) const {
    for (int f = 0; f < y.cols(); ++f)
      if (y(s, f) != 0) return f;
    return -1;
  }
  std::vector<int> ues_in(int f) const {
    std::vector<int> out;
    for (int k = 0; k < x.rows(); ++k)
      if (x(k, f) != 0) out.push_back(k);
    return out;
  }
  std::vector<int> csps_in(int f) const {
    std::vector<int> out;
    for (int s = 0; s < y.rows(); ++s)
      if (y(s, f) != 0) out.push_back(s);
    return out;
  }

  /// Smallest z consistent with y: an ECSP is on iff one of its CSPs is.
  void sync_ecsps(const std::vector<int>& ecsp_of_csp) {
    z.setZero();
    for (int s = 0; s < y.rows(); ++s)
      if (y.row(s).sum() > 0) z(ecsp_of_csp[static_cast<std::size_t>(s)]) = 1;
  }

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

/// rho(s, f) in sqrt(W); rho^2 is the transmit power CSP s spends in federation f.
struct PowerAllocation {
  Eigen::MatrixXd rho;
};

}  // namespace cfed
