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


// Acceptance suite. Prints one PASS/FAIL line per criterion on stdout and
// exits nonzero if any criterion fails. Progress goes to stderr.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cfed/experiment.hpp"
#include "cfed/oracles.hpp"

namespace {

using cfed::ResultRow;

int failures = 0;

void report(const char* id, bool pass, double seconds, const std::string& detail) {
  std::printf("%s %-3s %7.1fs  %s\n", pass ? "PASS" : "FAIL", id, seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

cfed::SweepControl on_threads(unsigned n) {
  cfed::SweepControl c;
  c.threads = n;
  return c;
}

cfed::ExperimentConfig base_config() {
  cfed::ExperimentConfig c;
  c.scenario.num_ues = 24;
  c.scenario.num_ecsps = 5;
  c.scenario.num_federations = 2;
  c.scenario.seed = 1;
  c.drops = 10;
  return c;
}

std::vector<ResultRow> sweep(cfed::ExperimentConfig c, int S, int M, std::vector<int> feds, std::vector<double> rates) {
  c.sweep.csp_counts = {S};
  c.sweep.antenna_counts = {M};
  c.sweep.federation_counts = std::move(feds);
  c.sweep.rates_mbps = std::move(rates);
  const auto t0 = std::chrono::steady_clock::now();
  auto rows = cfed::run_sweep(c, on_threads(1)).rows;
  std::fprintf(stderr, "  sweep S=%d M=%d: %zu rows in %.1fs\n", S, M, rows.size(), since(t0));
  return rows;
}

// (rate, drop) -> row, for one configuration.
using Grid = std::map<std::pair<double, int>, ResultRow>;

Grid grid_of(const std::vector<ResultRow>& rows, int F = -1) {
  Grid g;
  for (const auto& r : rows)
    if (F < 0 || r.F == F) g[{r.rate_mbps, r.drop}] = r;
  return g;
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream os(path);
  cfed::write_rows_csv(os, rows);
}

// Criteria 1-4 -----------------------------------------------------------------

void oracle_criteria() {
  namespace o = cfed::oracle;
  o::OracleSuiteOptions opt;

  auto t0 = std::chrono::steady_clock::now();
  auto c1 = o::check_energy_golden();
  double dt = since(t0);
  report("1", c1.passed && dt < 1.0, dt, fmt("max rel err %.3g (tol 1e-9); %s", c1.residual, c1.detail.c_str()));

  t0 = std::chrono::steady_clock::now();
  auto c2 = o::check_socp_closed_form(opt);
  dt = since(t0);
  report("2", c2.passed && dt < 10.0, dt,
         fmt("max rel err %.3g (tol 1e-6); %s", c2.residual, c2.detail.c_str()));

  t0 = std::chrono::steady_clock::now();
  auto c3 = o::check_milp(opt);
  dt = since(t0);
  report("3", c3.passed && dt < 60.0, dt, fmt("max rel gap %.3g; %s", c3.residual, c3.detail.c_str()));

  t0 = std::chrono::steady_clock::now();
  auto c4 = o::check_joint(opt);
  dt = since(t0);
  report("4", c4.passed && dt < 300.0, dt, fmt("worst ratio %.4g; %s", c4.residual, c4.detail.c_str()));
}

// Criterion 5 -----------------------------------------------------------------

void verifier_gate() {
  const auto t0 = std::chrono::steady_clock::now();
  cfed::ExperimentConfig c = base_config();
  c.scenario.num_csps = 30;
  c.scenario.antennas_per_csp = 16;
  c.scenario.pilot_len = 12;
  c.fill_axes();
  const std::vector<double> rates = {20, 40, 60};
  int returned = 0, rejected = 0;
  for (int d = 0; d < 100; ++d) {
    cfed::ScenarioConfig sc = c.scenario;
    sc.seed = cfed::drop_seed(c.scenario.seed, static_cast<std::uint64_t>(d));
    const auto out = cfed::solve_drop(c, sc, rates, d, true);
    for (std::size_t i = 0; i < out.solutions.size(); ++i) {
      const auto& s = out.solutions[i];
      if (!s.success) continue;
      ++returned;
      if (!cfed::verify_solution(out.problems[i], s.assignment, s.power).feasible) ++rejected;
    }
  }
  report("5", rejected == 0 && returned > 0, since(t0),
         fmt("%d feasible solutions over 100 drops x 3 rates, %d rejected by the verifier", returned, rejected));
}

// Criterion 6 -----------------------------------------------------------------

void fig3_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  cfed::ExperimentConfig c = base_config();
  c.scenario.pilot_len = 12;
  const std::vector<double> rates = {10, 20, 30, 40, 50, 60, 70, 80, 90, 96};
  const std::vector<std::pair<int, int>> configs = {{15, 32}, {30, 16}, {60, 8}, {30, 32}, {60, 16}, {15, 8}};
  std::map<std::pair<int, int>, Grid> grids;
  std::vector<ResultRow> all;
  for (const auto& [S, M] : configs) {
    auto rows = sweep(c, S, M, {2}, rates);
    grids[{S, M}] = grid_of(rows);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  const double dt = since(t0);
  write_csv("acceptance_fig3.csv", all);

  // (a) mean power over drops feasible at both neighbouring rates.
  std::string worst;
  double worst_ratio = 1e300;
  for (const auto& [cfg, g] : grids)
    for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
      double lo = 0, hi = 0;
      int n = 0;
      for (int d = 0; d < c.drops; ++d) {
        const auto& a = g.at({rates[i], d});
        const auto& b = g.at({rates[i + 1], d});
        if (!a.feasible || !b.feasible) continue;
        lo += a.total_power_w;
        hi += b.total_power_w;
        ++n;
      }
      if (n == 0 || lo <= 0) continue;
      const double ratio = hi / lo;
      if (ratio < worst_ratio) {
        worst_ratio = ratio;
        worst = fmt("%dx%d %g->%g Mbit/s", cfg.first, cfg.second, rates[i], rates[i + 1]);
      }
    }
  report("6a", worst_ratio >= 0.95, dt, fmt("min mean-power ratio between neighbouring rates %.4f at %s (need >= 0.95)",
                                            worst_ratio, worst.c_str()));

  // (b) fewer CSPs with more antennas, same total antennas.
  const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> pairs = {
      {{15, 32}, {30, 16}}, {{30, 16}, {60, 8}}, {{30, 32}, {60, 16}}};
  bool ok_b = true;
  std::string detail_b;
  for (const auto& [few, many] : pairs) {
    int both = 0, wins = 0;
    for (const auto& [key, a] : grids[few]) {
      const auto& b = grids[many].at(key);
      if (!a.feasible || !b.feasible) continue;
      ++both;
      if (a.total_power_w < b.total_power_w) ++wins;
    }
    const double share = both ? static_cast<double>(wins) / both : 0.0;
    ok_b = ok_b && both > 0 && share >= 0.70;
    detail_b += fmt("%dx%d<%dx%d %d/%d (%.0f%%); ", few.first, few.second, many.first, many.second, wins, both,
                    100 * share);
  }
  report("6b", ok_b, dt, detail_b + "need >= 70% each");

  // (c) first rate with feasible share below one half.
  auto first_infeasible = [&](const Grid& g) {
    for (double r : rates) {
      int ok = 0;
      for (int d = 0; d < c.drops; ++d) ok += g.at({r, d}).feasible ? 1 : 0;
      if (ok < 0.5 * c.drops) return r;
    }
    return 1e300;
  };
  const double weak = first_infeasible(grids[{15, 8}]);
  const double strong1 = first_infeasible(grids[{30, 32}]);
  const double strong2 = first_infeasible(grids[{60, 16}]);
  auto show = [&](double r) { return r > 1e299 ? std::string("never") : fmt("%g", r); };
  report("6c", weak < strong1 && weak < strong2, dt,
         "majority infeasible from: 15x8 " + show(weak) + ", 30x32 " + show(strong1) + ", 60x16 " + show(strong2) +
             " Mbit/s; total sweep time " + fmt("%.0fs (target < 1800s)", dt));
}

// Criterion 7 -----------------------------------------------------------------

void fig4_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  cfed::ExperimentConfig c = base_config();
  c.scenario.pilot_len = 0;  // K / F
  const std::vector<double> rates = {20, 40, 60};
  const auto rows = sweep(c, 30, 16, {1, 2, 3, 4}, rates);
  const double dt = since(t0);
  write_csv("acceptance_fig4.csv", rows);
  const Grid g1 = grid_of(rows, 1), g2 = grid_of(rows, 2);
  const double top = rates.back();
  double p1 = 0, p2 = 0;
  int n = 0;
  for (int d = 0; d < c.drops; ++d) {
    const auto& a = g1.at({top, d});
    const auto& b = g2.at({top, d});
    if (!a.feasible || !b.feasible) continue;
    p1 += a.total_power_w;
    p2 += b.total_power_w;
    ++n;
  }
  int f1 = 0, f2 = 0;
  for (int d = 0; d < c.drops; ++d) {
    f1 += g1.at({top, d}).feasible;
    f2 += g2.at({top, d}).feasible;
  }
  std::string detail = fmt("at %g Mbit/s: feasible F=1 %d/%d, F=2 %d/%d", top, f1, c.drops, f2, c.drops);
  if (n > 0) detail += fmt("; over %d shared drops mean F=1 %.3f W, F=2 %.3f W", n, p1 / n, p2 / n);
  else detail += "; no drop feasible for both";
  report("7", n > 0 && p2 <= p1 && dt < 1800, dt, detail);
}

// Criterion 8 -----------------------------------------------------------------

void determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  cfed::ExperimentConfig c = base_config();
  c.scenario.pilot_len = 12;
  c.drops = 3;
  c.sweep.csp_counts = {15, 30};
  c.sweep.antenna_counts = {16};
  c.sweep.federation_counts = {2};
  c.sweep.rates_mbps = {20, 60};
  std::ostringstream a, b;
  cfed::write_rows_csv(a, cfed::run_sweep(c, on_threads(1)).rows);
  cfed::write_rows_csv(b, cfed::run_sweep(c, on_threads(2)).rows);
  report("8", a.str() == b.str() && !a.str().empty(), since(t0),
         fmt("two runs, %zu bytes each, %s", a.str().size(), a.str() == b.str() ? "identical" : "different"));
}

}  // namespace

int main() {
  try {
    oracle_criteria();
    verifier_gate();
    fig3_criteria();
    fig4_criterion();
    determinism();
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
