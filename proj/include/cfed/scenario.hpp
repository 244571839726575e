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

// Indoor-factory deployments: ceiling CSP grid, ECSP partition, UE drops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfed/error.hpp"
#include "cfed/rng.hpp"

namespace cfed {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline double distance_2d(const Point3& a, const Point3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance_3d(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

struct HallGeometry {
  double width_m = 12.0;   // x extent
  double length_m = 20.0;  // y extent
  double height_m = 10.0;
  double csp_height_m = 10.0;
  double ue_height_m = 1.5;

  void validate(const std::string& path = "scenario.hall") const {
    if (!(width_m > 0)) throw ConfigError(path + ".width_m", "must be positive");
    if (!(length_m > 0)) throw ConfigError(path + ".length_m", "must be positive");
    if (!(height_m > 0)) throw ConfigError(path + ".height_m", "must be positive");
    if (!(csp_height_m > 0) || csp_height_m > height_m)
      throw ConfigError(path + ".csp_height_m", "must lie in (0, height_m]");
    if (!(ue_height_m > 0) || ue_height_m >= csp_height_m)
      throw ConfigError(path + ".ue_height_m", "must lie in (0, csp_height_m)");
  }

  bool contains(const Point3& p) const {
    return p.x >= 0 && p.x <= width_m && p.y >= 0 && p.y <= length_m && p.z >= 0 && p.z <= height_m;
  }
};

struct ScenarioConfig {
  int num_csps = 30;
  int num_ecsps = 5;
  int antennas_per_csp = 16;
  int num_ues = 24;
  int num_federations = 2;
  /// 0 selects ceil(K / F), the smallest value that admits a full assignment.
  int pilot_len = 0;
  int coherence_len = 200;
  double carrier_hz = 3e9;
  double rate_thr_bps = 20e6;
  std::uint64_t seed = 1;
  HallGeometry hall{};

  int effective_pilot_len() const {
    if (pilot_len > 0) return pilot_len;
    return num_federations > 0 ? (num_ues + num_federations - 1) / num_federations : 0;
  }

  /// Domain checks. Structural infeasibility (K > F tau_p) is reported
  /// separately by build_scenario.
  void validate(const std::string& path = "scenario") const {
    if (num_csps < 1) throw ConfigError(path + ".num_csps", "must be >= 1");
    if (num_ecsps < 1 || num_ecsps > num_csps)
      throw ConfigError(path + ".num_ecsps", "must lie in [1, num_csps]");
    if (antennas_per_csp < 1) throw ConfigError(path + ".antennas_per_csp", "must be >= 1");
    if (num_ues < 1) throw ConfigError(path + ".num_ues", "must be >= 1");
    if (num_federations < 1) throw ConfigError(path + ".num_federations", "must be >= 1");
    if (pilot_len < 0) throw ConfigError(path + ".pilot_len", "must be >= 0 (0 = auto)");
    if (effective_pilot_len() >= coherence_len)
      throw ConfigError(path + ".pilot_len", "pilot length must be shorter than coherence_len");
    if (!(carrier_hz > 0)) throw ConfigError(path + ".carrier_hz", "must be positive");
    if (!(rate_thr_bps >= 0)) throw ConfigError(path + ".rate_thr_bps", "must be non-negative");
    hall.validate(path + ".hall");
  }
};

struct Scenario {
  ScenarioConfig config;
  std::vector<Point3> csp_positions;
  std::vector<Point3> ue_positions;
  /// ecsp_partition[e] lists the CSP indices wired to ECSP e.
  std::vector<std::vector<int>> ecsp_partition;

  int pilot_len() const { return config.effective_pilot_len(); }

  /// Inverse of ecsp_partition.
  std::vector<int> ecsp_of_csp() const {
    std::vector<int> owner(csp_positions.size(), -1);
    for (std::size_t e = 0; e < ecsp_partition.size(); ++e)
      for (int s : ecsp_partition[e]) owner[static_cast<std::size_t>(s)] = static_cast<int>(e);
    return owner;
  }
};

/// Grid shape for `count` ceiling slots: for each column count c the row count
/// is ceil(count / c); the pair whose rows/cols ratio is closest to
/// length/width wins (ties go to fewer columns). Rows run along the length.
struct GridShape {
  int rows = 1;
  int cols = 1;
};

inline GridShape csp_grid_shape(int count, const HallGeometry& hall) {
  const double target = hall.length_m / hall.width_m;
  GridShape best{count, 1};
  double best_err = std::numeric_limits<double>::infinity();
  for (int c = 1; c <= count; ++c) {
    const int r = (count + c - 1) / c;
    const double err = std::abs(static_cast<double>(r) / c - target);
    if (err < best_err - 1e-12) {
      best_err = err;
      best = {r, c};
    }
  }
  return best;
}

/// Cell-centred ceiling grid. Surplus slots are removed from the last row,
/// keeping its occupied slots centred so the row stays mirror-symmetric when
/// the parity allows.
inline std::vector<Point3> place_csps(int count, const HallGeometry& hall) {
  if (count < 1) throw ConfigError("scenario.num_csps", "must be >= 1");
  const GridShape g = csp_grid_shape(count, hall);
  const double dx = hall.width_m / g.cols;
  const double dy = hall.length_m / g.rows;
  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < g.rows; ++i) {
    const double y = (i + 0.5) * dy;
    const bool last = (i == g.rows - 1);
    const int keep = last ? count - (g.rows - 1) * g.cols : g.cols;
    const int skip_front = (g.cols - keep) / 2;
    for (int j = skip_front; j < skip_front + keep; ++j) pts.push_back({(j + 0.5) * dx, y, hall.csp_height_m});
  }
  return pts;
}

/// CSPs sorted by (y, x) and cut into `num_ecsps` contiguous chunks whose
/// sizes differ by at most one (larger chunks first).
inline std::vector<std::vector<int>> partition_ecsps(const std::vector<Point3>& csp_positions, int num_ecsps) {
  const int n = static_cast<int>(csp_positions.size());
  if (num_ecsps < 1 || num_ecsps > n) throw ConfigError("scenario.num_ecsps", "must lie in [1, num_csps]");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = csp_positions[static_cast<std::size_t>(a)];
    const auto& pb = csp_positions[static_cast<std::size_t>(b)];
    if (pa.y != pb.y) return pa.y < pb.y;
    return pa.x < pb.x;
  });
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(num_ecsps));
  const int base = n / num_ecsps;
  const int extra = n % num_ecsps;
  int pos = 0;
  for (int e = 0; e < num_ecsps; ++e) {
    const int size = base + (e < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) sets[static_cast<std::size_t>(e)].push_back(order[static_cast<std::size_t>(pos++)]);
    std::sort(sets[static_cast<std::size_t>(e)].begin(), sets[static_cast<std::size_t>(e)].end());
  }
  return sets;
}

inline std::vector<Point3> drop_ues(int count, const HallGeometry& hall, Rng& rng) {
  if (count < 1) throw ConfigError("scenario.num_ues", "must be >= 1");
  std::uniform_real_distribution<double> ux(0.0, hall.width_m);
  std::uniform_real_distribution<double> uy(0.0, hall.length_m);
  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double x = ux(rng);
    const double y = uy(rng);
    pts.push_back({x, y, hall.ue_height_m});
  }
  return pts;
}

inline void check_structural_feasibility(const ScenarioConfig& cfg) {
  const long cap = static_cast<long>(cfg.num_federations) * cfg.effective_pilot_len();
  if (cfg.num_ues > cap)
    throw StructuralInfeasibility("K = " + std::to_string(cfg.num_ues) + " UEs exceed F * tau_p = " +
                                  std::to_string(cap) + " pilot slots");
}

inline Scenario build_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  check_structural_feasibility(cfg);
  Scenario sc;
  sc.config = cfg;
  sc.csp_positions = place_csps(cfg.num_csps, cfg.hall);
  auto rng = child_stream(cfg.seed, Stream::ue_drop);
  sc.ue_positions = drop_ues(cfg.num_ues, cfg.hall, rng);
  sc.ecsp_partition = partition_ecsps(sc.csp_positions, cfg.num_ecsps);

  std::vector<int> seen(static_cast<std::size_t>(cfg.num_csps), 0);
  for (const auto& set : sc.ecsp_partition) {
    if (set.empty()) throw Error("empty ECSP partition set");
    for (int s : set) ++seen[static_cast<std::size_t>(s)];
  }
  for (int c : seen)
    if (c != 1) throw Error("ECSP partition is not a disjoint cover of the CSPs");
  for (const auto& p : sc.csp_positions)
    if (!cfg.hall.contains(p)) throw Error("CSP placed outside the hall");
  for (const auto& p : sc.ue_positions)
    if (!cfg.hall.contains(p)) throw Error("UE dropped outside the hall");
  return sc;
}

// JSON ----------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const Point3& p) { j = nlohmann::json::array({p.x, p.y, p.z}); }
inline void from_json(const nlohmann::json& j, Point3& p) {
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
  p.z = j.at(2).get<double>();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HallGeometry, width_m, length_m, height_m, csp_height_m, ue_height_m)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScenarioConfig, num_csps, num_ecsps, antennas_per_csp, num_ues,
                                                num_federations, pilot_len, coherence_len, carrier_hz, rate_thr_bps,
                                                seed, hall)

inline void to_json(nlohmann::json& j, const Scenario& sc) {
  j = nlohmann::json{{"config", sc.config},
                     {"pilot_len", sc.pilot_len()},
                     {"csp_positions", sc.csp_positions},
                     {"ue_positions", sc.ue_positions},
                     {"ecsp_partition", sc.ecsp_partition}};
}

inline void from_json(const nlohmann::json& j, Scenario& sc) {
  j.at("config").get_to(sc.config);
  j.at("csp_positions").get_to(sc.csp_positions);
  j.at("ue_positions").get_to(sc.ue_positions);
  j.at("ecsp_partition").get_to(sc.ecsp_partition);
}

}  // namespace cfed
