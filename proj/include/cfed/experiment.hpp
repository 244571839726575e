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

// Experiment configuration, Monte Carlo sweeps and their CSV/JSON outputs.
//
// One sweep task is a (S, M, F, drop) cell: the deployment and channel are
// realized once and solved for every rate on the axis. Drop d uses seed
// drop_seed(master, d) for every S, M and F, so configurations are compared
// on the same UE positions.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "cfed/channel.hpp"
#include "cfed/energy.hpp"
#include "cfed/error.hpp"
#include "cfed/model.hpp"
#include "cfed/orchestrator.hpp"
#include "cfed/rng.hpp"
#include "cfed/scenario.hpp"

#ifndef CFED_VERSION
#define CFED_VERSION "0.0.0"
#endif

namespace cfed {

inline constexpr double kBandwidthHz = 20e6;

struct SweepAxes {
  std::vector<double> rates_mbps;
  std::vector<int> csp_counts;
  std::vector<int> antenna_counts;
  std::vector<int> federation_counts;
};

struct ExperimentConfig {
  ScenarioConfig scenario{};
  ChannelParams channel{};
  EnergyParams energy{};
  SolveOptions solver{};
  SweepAxes sweep{};
  int drops = 10;
  std::string out_path = "results.csv";

  /// Axes left empty fall back to the single value in `scenario`.
  void fill_axes() {
    if (sweep.rates_mbps.empty()) sweep.rates_mbps = {scenario.rate_thr_bps / 1e6};
    if (sweep.csp_counts.empty()) sweep.csp_counts = {scenario.num_csps};
    if (sweep.antenna_counts.empty()) sweep.antenna_counts = {scenario.antennas_per_csp};
    if (sweep.federation_counts.empty()) sweep.federation_counts = {scenario.num_federations};
  }

  void validate() const {
    scenario.validate();
    channel.validate();
    energy.validate();
    if (energy.pa_exponent != 0.5) throw ConfigError("energy.pa_exponent", "the optimizer requires 0.5");
    solver.validate();
    if (drops < 1) throw ConfigError("drops", "must be >= 1");
    if (sweep.rates_mbps.empty()) throw ConfigError("sweep.rates_mbps", "must not be empty");
    if (sweep.csp_counts.empty()) throw ConfigError("sweep.csp_counts", "must not be empty");
    if (sweep.antenna_counts.empty()) throw ConfigError("sweep.antenna_counts", "must not be empty");
    if (sweep.federation_counts.empty()) throw ConfigError("sweep.federation_counts", "must not be empty");
    for (double r : sweep.rates_mbps)
      if (!(r >= 0)) throw ConfigError("sweep.rates_mbps", "rates must be non-negative");
    for (int s : sweep.csp_counts)
      if (s < scenario.num_ecsps) throw ConfigError("sweep.csp_counts", "each count must be >= scenario.num_ecsps");
    for (int m : sweep.antenna_counts)
      if (m < 1) throw ConfigError("sweep.antenna_counts", "must be >= 1");
    for (int f : sweep.federation_counts) {
      if (f < 1) throw ConfigError("sweep.federation_counts", "must be >= 1");
      ScenarioConfig c = scenario;
      c.num_federations = f;
      c.validate();
    }
  }
};

// JSON ------------------------------------------------------------------------

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SweepAxes, rates_mbps, csp_counts, antenna_counts, federation_counts)

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"scenario", c.scenario}, {"channel", c.channel}, {"energy", c.energy}, {"solver", c.solver},
                     {"sweep", c.sweep},       {"drops", c.drops},     {"out_path", c.out_path}};
}

namespace detail {

/// Rejects keys the defaults do not know about, recursing into objects.
inline void check_keys(const nlohmann::json& given, const nlohmann::json& known, const std::string& path) {
  if (!given.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : given.items()) {
    const std::string here = path.empty() ? key : path + "." + key;
    if (!known.contains(key)) throw ConfigError(here, "unknown field");
    if (known.at(key).is_object() && !known.at(key).empty()) check_keys(value, known.at(key), here);
  }
}

template <typename T>
void read_section(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    T merged = out;
    nlohmann::json base = merged;
    base.merge_patch(j.at(key));
    base.get_to(merged);
    out = merged;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace detail

/// Merges `j` over the defaults. Unknown fields and type mismatches raise
/// ConfigError naming the offending path.
inline ExperimentConfig parse_experiment(const nlohmann::json& j) {
  ExperimentConfig c;
  nlohmann::json known = c;
  known["solver"]["socp"] = c.solver.socp;
  detail::check_keys(j, known, "");
  detail::read_section(j, "scenario", c.scenario);
  detail::read_section(j, "channel", c.channel);
  detail::read_section(j, "energy", c.energy);
  detail::read_section(j, "solver", c.solver);
  detail::read_section(j, "sweep", c.sweep);
  try {
    c.drops = j.value("drops", c.drops);
    c.out_path = j.value("out_path", c.out_path);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("drops/out_path", e.what());
  }
  c.fill_axes();
  return c;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

// Rows ------------------------------------------------------------------------

/// One (configuration, rate, drop) outcome; field names double as CSV headers.
struct ResultRow {
  int drop = 0;
  std::uint64_t seed = 0;
  int S = 0;
  int S_bar = 0;
  int M = 0;
  int K = 0;
  int F = 0;
  int tau_p = 0;
  double rate_mbps = 0;
  bool feasible = false;
  double total_power_w = 0;
  int active_csps = 0;
  int active_ecsps = 0;
  std::string method_tag;
  int outer_iters = 0;
  long milp_nodes = 0;
  double wall_time_s = 0;
};

inline const char* kResultHeader =
    "drop,seed,S,S_bar,M,K,F,tau_p,rate_mbps,feasible,total_power_w,active_csps,active_ecsps,method_tag,"
    "outer_iters,milp_nodes,wall_time_s";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// wall_time_s is left blank unless `timing` is set, keeping the file a
/// function of the configuration alone.
inline void write_row_csv(std::ostream& os, const ResultRow& r, bool timing) {
  os << r.drop << ',' << r.seed << ',' << r.S << ',' << r.S_bar << ',' << r.M << ',' << r.K << ',' << r.F << ','
     << r.tau_p << ',' << format_double(r.rate_mbps) << ',' << (r.feasible ? 1 : 0) << ',';
  if (r.feasible)
    os << format_double(r.total_power_w) << ',' << r.active_csps << ',' << r.active_ecsps;
  else
    os << ",,";
  os << ',' << r.method_tag << ',' << r.outer_iters << ',' << r.milp_nodes << ',';
  if (timing) os << format_double(r.wall_time_s);
  os << '\n';
}

inline void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool timing = false) {
  os << kResultHeader << '\n';
  for (const auto& r : rows) write_row_csv(os, r, timing);
}

/// Canonical order: S, M, F, rate, drop.
inline bool row_before(const ResultRow& a, const ResultRow& b) {
  return std::tie(a.S, a.M, a.F, a.rate_mbps, a.drop) < std::tie(b.S, b.M, b.F, b.rate_mbps, b.drop);
}

struct SummaryRow {
  int S = 0, S_bar = 0, M = 0, K = 0, F = 0, tau_p = 0;
  double rate_mbps = 0;
  int drops = 0;
  int feasible_drops = 0;
  double mean_power_w = 0;  // over feasible drops
  double mean_active_csps = 0;
};

inline const char* kSummaryHeader =
    "S,S_bar,M,K,F,tau_p,rate_mbps,drops,feasible_drops,feasible_fraction,mean_power_w,mean_active_csps";

inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<int, int, int, double>, SummaryRow> cells;
  for (const auto& r : rows) {
    auto& c = cells[{r.S, r.M, r.F, r.rate_mbps}];
    c.S = r.S;
    c.S_bar = r.S_bar;
    c.M = r.M;
    c.K = r.K;
    c.F = r.F;
    c.tau_p = r.tau_p;
    c.rate_mbps = r.rate_mbps;
    ++c.drops;
    if (r.feasible) {
      ++c.feasible_drops;
      c.mean_power_w += r.total_power_w;
      c.mean_active_csps += r.active_csps;
    }
  }
  std::vector<SummaryRow> out;
  for (auto& [key, c] : cells) {
    if (c.feasible_drops > 0) {
      c.mean_power_w /= c.feasible_drops;
      c.mean_active_csps /= c.feasible_drops;
    }
    out.push_back(c);
  }
  return out;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& c : rows) {
    os << c.S << ',' << c.S_bar << ',' << c.M << ',' << c.K << ',' << c.F << ',' << c.tau_p << ','
       << format_double(c.rate_mbps) << ',' << c.drops << ',' << c.feasible_drops << ','
       << format_double(static_cast<double>(c.feasible_drops) / c.drops) << ',';
    if (c.feasible_drops > 0) os << format_double(c.mean_power_w) << ',' << format_double(c.mean_active_csps);
    else os << ',';
    os << '\n';
  }
}

// Running -----------------------------------------------------------------------

struct DropOutcome {
  std::vector<ResultRow> rows;
  std::vector<FederationSolution> solutions;  // parallel to rows
  std::vector<FederationProblem> problems;    // parallel to rows
};

/// Realizes one deployment and solves it at every rate. `keep` retains the
/// problems and solutions for callers that verify them.
inline DropOutcome solve_drop(const ExperimentConfig& cfg, const ScenarioConfig& sc_cfg,
                              const std::vector<double>& rates_mbps, int drop, bool keep = false) {
  DropOutcome out;
  ResultRow base;
  base.drop = drop;
  base.seed = sc_cfg.seed;
  base.S = sc_cfg.num_csps;
  base.S_bar = sc_cfg.num_ecsps;
  base.M = sc_cfg.antennas_per_csp;
  base.K = sc_cfg.num_ues;
  base.F = sc_cfg.num_federations;
  base.tau_p = sc_cfg.effective_pilot_len();

  try {
    check_structural_feasibility(sc_cfg);
  } catch (const StructuralInfeasibility&) {
    for (double r : rates_mbps) {
      ResultRow row = base;
      row.rate_mbps = r;
      row.method_tag = "structural";
      out.rows.push_back(row);
    }
    return out;
  }
  const Scenario sc = build_scenario(sc_cfg);
  const ChannelRealization ch = realize_channel(sc, cfg.channel);
  for (double r : rates_mbps) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto req = RateRequirement::uniform(sc_cfg.num_ues, r * 1e6, kBandwidthHz, sc_cfg.coherence_len, sc.pilot_len());
    const FederationProblem p = make_problem(sc, ch, req, cfg.channel, cfg.energy);
    SolveOptions opt = cfg.solver;
    opt.seed = sc_cfg.seed;
    FederationSolution sol = solve(p, opt);
    ResultRow row = base;
    row.rate_mbps = r;
    row.feasible = sol.success;
    row.method_tag = sol.success ? to_string(sol.method) : "infeasible";
    row.outer_iters = sol.outer_iters;
    row.milp_nodes = sol.milp_nodes;
    if (sol.success) {
      row.total_power_w = sol.avg_power_w;
      row.active_csps = sol.assignment.active_csps();
      row.active_ecsps = sol.assignment.active_ecsps();
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.rows.push_back(row);
    if (keep) {
      out.problems.push_back(p);
      out.solutions.push_back(std::move(sol));
    }
  }
  return out;
}

/// The configured scenario as-is: its seed, counts and rate.
inline ResultRow run_single(const ExperimentConfig& cfg) {
  cfg.validate();
  return solve_drop(cfg, cfg.scenario, {cfg.scenario.rate_thr_bps / 1e6}, 0).rows.front();
}

struct SweepControl {
  unsigned threads = 0;                      // 0: hardware concurrency
  const std::atomic<bool>* stop = nullptr;  // checked between tasks
  /// Called with each finished task's rows, under a lock.
  std::function<void(const std::vector<ResultRow>&)> on_rows;
};

struct SweepResult {
  std::vector<ResultRow> rows;  // canonical order
  bool interrupted = false;
  std::size_t tasks_done = 0;
  std::size_t tasks_total = 0;
};

inline SweepResult run_sweep(const ExperimentConfig& cfg, const SweepControl& ctl = {}) {
  cfg.validate();
  struct Task {
    int S, M, F, drop;
  };
  std::vector<Task> tasks;
  for (int S : cfg.sweep.csp_counts)
    for (int M : cfg.sweep.antenna_counts)
      for (int F : cfg.sweep.federation_counts)
        for (int d = 0; d < cfg.drops; ++d) tasks.push_back({S, M, F, d});
  std::vector<double> rates = cfg.sweep.rates_mbps;
  std::sort(rates.begin(), rates.end());

  std::vector<std::vector<ResultRow>> results(tasks.size());
  std::vector<char> done(tasks.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&]() {
    while (true) {
      if (ctl.stop && ctl.stop->load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      ScenarioConfig sc = cfg.scenario;
      sc.num_csps = t.S;
      sc.antennas_per_csp = t.M;
      sc.num_federations = t.F;
      sc.seed = drop_seed(cfg.scenario.seed, static_cast<std::uint64_t>(t.drop));
      try {
        auto rows = solve_drop(cfg, sc, rates, t.drop).rows;
        std::lock_guard<std::mutex> lock(mu);
        if (ctl.on_rows) ctl.on_rows(rows);
        results[i] = std::move(rows);
        done[i] = 1;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  unsigned n = ctl.threads ? ctl.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  SweepResult out;
  out.tasks_total = tasks.size();
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (done[i]) {
      ++out.tasks_done;
      out.rows.insert(out.rows.end(), results[i].begin(), results[i].end());
    }
  out.interrupted = out.tasks_done < out.tasks_total;
  std::sort(out.rows.begin(), out.rows.end(), row_before);
  return out;
}

inline nlohmann::json run_manifest(const ExperimentConfig& cfg, const SweepResult& res, const std::string& csv_path,
                                   const std::string& summary_path) {
  const nlohmann::json effective = cfg;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(effective.dump())));
  return nlohmann::json{{"tool", "cfed"},
                        {"version", CFED_VERSION},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                      "." + std::to_string(EIGEN_MINOR_VERSION)},
                        {"config_hash_fnv1a", hash},
                        {"master_seed", cfg.scenario.seed},
                        {"drops", cfg.drops},
                        {"rows", res.rows.size()},
                        {"tasks_done", res.tasks_done},
                        {"tasks_total", res.tasks_total},
                        {"interrupted", res.interrupted},
                        {"csv", csv_path},
                        {"summary_csv", summary_path},
                        {"config", effective}};
}

}  // namespace cfed
