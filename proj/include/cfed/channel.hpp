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

// Large-scale fading for the 3GPP TR 38.901 InF-SH (indoor factory, sparse
// clutter, high base station) scenario, plus MMSE estimate variances.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cfed/error.hpp"
#include "cfed/rng.hpp"
#include "cfed/scenario.hpp"

namespace cfed {

struct Clutter {
  double density = 0.2;  // r
  double size_m = 10.0;  // d_clutter
  double height_m = 2.0;  // h_c
};

/// -174 dBm/Hz thermal floor over `bandwidth_hz` plus a receiver noise figure.
inline double thermal_noise_w(double bandwidth_hz, double noise_figure_db) {
  const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

struct ChannelParams {
  double noise_power_w = thermal_noise_w(20e6, 7.0);
  /// Normalized per-symbol pilot SNR: 100 mW pilot power over the noise floor.
  double pilot_snr = 0.1 / thermal_noise_w(20e6, 7.0);
  bool shadowing_enabled = true;
  double shadowing_los_db = 4.3;
  double shadowing_nlos_db = 5.9;
  Clutter clutter{};

  void validate(const std::string& path = "channel") const {
    if (!(pilot_snr > 0)) throw ConfigError(path + ".pilot_snr", "must be positive");
    if (!(noise_power_w > 0)) throw ConfigError(path + ".noise_power_w", "must be positive");
    if (!(clutter.density > 0 && clutter.density < 1))
      throw ConfigError(path + ".clutter.density", "must lie in (0, 1)");
    if (!(clutter.size_m > 0)) throw ConfigError(path + ".clutter.size_m", "must be positive");
    if (!(shadowing_los_db >= 0) || !(shadowing_nlos_db >= 0))
      throw ConfigError(path + ".shadowing", "standard deviations must be non-negative");
  }
};

struct ChannelRealization {
  Eigen::MatrixXd beta;   // K x S, linear power gain
  Eigen::MatrixXd gamma;  // K x S, MMSE estimate variance
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> los;

  Eigen::Index num_ues() const { return beta.rows(); }
  Eigen::Index num_csps() const { return beta.cols(); }
};

/// InF-SH LOS probability exp(-d_2d / k_subsce) with
/// k_subsce = -d_clutter / ln(1 - r) * (h_BS - h_UT) / (h_c - h_UT).
inline double los_probability(double d_2d, double h_bs, double h_ut, const Clutter& clutter) {
  if (d_2d < 0) throw Error("los_probability: negative distance");
  if (clutter.height_m <= h_ut) throw Error("los_probability: clutter height must exceed UE height");
  const double k_subsce =
      -clutter.size_m / std::log(1.0 - clutter.density) * (h_bs - h_ut) / (clutter.height_m - h_ut);
  return std::exp(-d_2d / k_subsce);
}

/// Distances below 1 m are clamped to 1 m, the lower edge of the model's validity range.
inline double path_loss_los_db(double d_3d, double fc_hz) {
  const double d = std::max(d_3d, 1.0);
  return 31.84 + 21.5 * std::log10(d) + 19.0 * std::log10(fc_hz / 1e9);
}

inline double path_loss_db(double d_3d, double fc_hz, bool los, double shadow_db = 0.0) {
  const double d = std::max(d_3d, 1.0);
  const double pl_los = path_loss_los_db(d, fc_hz);
  if (los) return pl_los + shadow_db;
  const double pl_sh = 32.4 + 23.0 * std::log10(d) + 20.0 * std::log10(fc_hz / 1e9);
  return std::max(pl_los, pl_sh) + shadow_db;
}

inline double mmse_variance(double beta, int pilot_len, double pilot_snr) {
  const double a = pilot_len * pilot_snr * beta;
  return a * beta / (a + 1.0);
}

/// LOS states and shadowing come from the scenario seed's dedicated streams.
inline ChannelRealization realize_channel(const Scenario& sc, const ChannelParams& params) {
  params.validate();
  const auto& cfg = sc.config;
  const auto K = static_cast<Eigen::Index>(sc.ue_positions.size());
  const auto S = static_cast<Eigen::Index>(sc.csp_positions.size());
  const int tau_p = sc.pilot_len();
  auto los_rng = child_stream(cfg.seed, Stream::los);
  auto sh_rng = child_stream(cfg.seed, Stream::shadowing);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ChannelRealization ch;
  ch.beta.resize(K, S);
  ch.gamma.resize(K, S);
  ch.los.resize(K, S);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& ue = sc.ue_positions[static_cast<std::size_t>(k)];
    for (Eigen::Index s = 0; s < S; ++s) {
      const auto& csp = sc.csp_positions[static_cast<std::size_t>(s)];
      const double p_los = los_probability(distance_2d(ue, csp), csp.z, ue.z, params.clutter);
      const bool los = unif(los_rng) < p_los;
      const double z = gauss(sh_rng);
      double shadow = 0.0;
      if (params.shadowing_enabled) shadow = z * (los ? params.shadowing_los_db : params.shadowing_nlos_db);
      const double pl = path_loss_db(distance_3d(ue, csp), cfg.carrier_hz, los, shadow);
      const double b = std::pow(10.0, -pl / 10.0);
      ch.los(k, s) = los;
      ch.beta(k, s) = b;
      ch.gamma(k, s) = mmse_variance(b, tau_p, params.pilot_snr);
    }
  }
  return ch;
}

/// Recomputes gamma for another pilot length without redrawing beta.
inline void refresh_gamma(ChannelRealization& ch, int pilot_len, double pilot_snr) {
  ch.gamma = ch.beta.unaryExpr([&](double b) { return mmse_variance(b, pilot_len, pilot_snr); });
}

// Matrix CSV: one row per UE, one column per CSP, header "csp0,csp1,...".

inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index s = 0; s < m.cols(); ++s) os << (s ? "," : "") << "csp" << s;
  os << '\n';
  char buf[32];
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    for (Eigen::Index s = 0; s < m.cols(); ++s) {
      std::snprintf(buf, sizeof buf, "%.17g", m(k, s));
      os << (s ? "," : "") << buf;
    }
    os << '\n';
  }
}

inline Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("matrix csv: missing header");
  const auto cols = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
  std::vector<double> vals;
  Eigen::Index rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index c = 0;
    while (std::getline(ss, cell, ',')) {
      vals.push_back(std::stod(cell));
      ++c;
    }
    if (c != cols) throw Error("matrix csv: ragged row " + std::to_string(rows));
    ++rows;
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index s = 0; s < cols; ++s) m(k, s) = vals[static_cast<std::size_t>(k * cols + s)];
  return m;
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Clutter, density, size_m, height_m)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ChannelParams, noise_power_w, pilot_snr, shadowing_enabled,
                                                shadowing_los_db, shadowing_nlos_db, clutter)

}  // namespace cfed
