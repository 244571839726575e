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

// cfed command line: single solves, Monte Carlo sweeps, the oracle suite and
// MILP dumps.
//
// Exit codes: 0 success, 2 configuration error, 3 oracle failure,
// 130 sweep interrupted (partial results written).

#include <atomic>
#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfed.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::vector<int> csps;
  std::vector<int> antennas;
  std::vector<int> federations;
  std::vector<double> rates_mbps;
  std::optional<int> drops;
  std::optional<std::string> out;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cfed::ConfigError("--config", "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw cfed::ConfigError("--config", e.what());
  }
}

cfed::ExperimentConfig load_config(const nlohmann::json& raw, const Overrides& o) {
  cfed::ExperimentConfig c = cfed::parse_experiment(raw);
  if (o.seed) c.scenario.seed = *o.seed;
  if (!o.csps.empty()) {
    c.scenario.num_csps = o.csps.front();
    c.sweep.csp_counts = o.csps;
  }
  if (!o.antennas.empty()) {
    c.scenario.antennas_per_csp = o.antennas.front();
    c.sweep.antenna_counts = o.antennas;
  }
  if (!o.federations.empty()) {
    c.scenario.num_federations = o.federations.front();
    c.sweep.federation_counts = o.federations;
  }
  if (!o.rates_mbps.empty()) {
    c.scenario.rate_thr_bps = o.rates_mbps.front() * 1e6;
    c.sweep.rates_mbps = o.rates_mbps;
  }
  if (o.drops) c.drops = *o.drops;
  if (o.out) c.out_path = *o.out;
  return c;
}

std::string stem_of(const std::string& path) {
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

cfed::FederationProblem problem_for(const cfed::ExperimentConfig& c) {
  const cfed::Scenario sc = cfed::build_scenario(c.scenario);
  const cfed::ChannelRealization ch = cfed::realize_channel(sc, c.channel);
  const auto req = cfed::RateRequirement::uniform(c.scenario.num_ues, c.scenario.rate_thr_bps, cfed::kBandwidthHz,
                                                  c.scenario.coherence_len, sc.pilot_len());
  return cfed::make_problem(sc, ch, req, c.channel, c.energy);
}

/// The MILP of the first alternation step: powers from the slack cone solve
/// under the initial assignment.
cfed::AssignmentMilp first_assignment_milp(const cfed::FederationProblem& p, const cfed::SolveOptions& opt) {
  const double lambda = opt.lambda_for(p);
  const cfed::PowerResult pr = cfed::solve_power(p, cfed::initial_assignment(p), lambda, true, opt.socp);
  return cfed::build_assignment_milp(p, pr.power, lambda);
}

void write_milp(const std::string& path, const cfed::MilpInstance& m) {
  if (path.empty() || path == "-") {
    cfed::write_milp_text(std::cout, m);
    return;
  }
  std::ofstream f(path);
  if (!f) throw cfed::ConfigError("--out", "cannot write " + path);
  cfed::write_milp_text(f, m);
}

int cmd_run(const cfed::ExperimentConfig& c, const std::string& dump_path, bool out_given, bool timing) {
  c.validate();
  const cfed::FederationProblem p = problem_for(c);
  if (!dump_path.empty()) write_milp(dump_path, first_assignment_milp(p, c.solver).milp);
  cfed::SolveOptions opt = c.solver;
  opt.seed = c.scenario.seed;
  const cfed::FederationSolution sol = cfed::solve(p, opt);
  nlohmann::json out{{"seed", c.scenario.seed},
                     {"num_csps", p.num_csps},
                     {"antennas_per_csp", p.antennas},
                     {"num_ues", p.num_ues},
                     {"num_federations", p.num_federations},
                     {"pilot_len", p.pilot_len},
                     {"rate_mbps", c.scenario.rate_thr_bps / 1e6},
                     {"feasible", sol.success},
                     {"total_power_w", sol.success ? nlohmann::json(sol.avg_power_w) : nlohmann::json()},
                     {"solution", sol}};
  std::cout << out.dump(2) << '\n';
  if (out_given) {
    std::ofstream f(c.out_path);
    if (!f) throw cfed::ConfigError("--out", "cannot write " + c.out_path);
    cfed::write_rows_csv(f, {cfed::run_single(c)}, timing);
  }
  return 0;
}

int cmd_sweep(const cfed::ExperimentConfig& c, bool timing, unsigned threads) {
  c.validate();
  std::signal(SIGINT, on_sigint);
  std::size_t done = 0;
  const std::size_t total = c.sweep.csp_counts.size() * c.sweep.antenna_counts.size() *
                            c.sweep.federation_counts.size() * static_cast<std::size_t>(c.drops);
  cfed::SweepControl ctl;
  ctl.threads = threads;
  ctl.stop = &g_stop;
  ctl.on_rows = [&](const std::vector<cfed::ResultRow>& rows) {
    ++done;
    const auto& r = rows.front();
    std::cerr << '[' << done << '/' << total << "] S=" << r.S << " M=" << r.M << " F=" << r.F << " drop=" << r.drop
              << '\n';
  };
  const cfed::SweepResult res = cfed::run_sweep(c, ctl);

  const std::string stem = stem_of(c.out_path);
  const std::string summary_path = stem + "_summary.csv";
  const std::string manifest_path = stem + "_manifest.json";
  {
    std::ofstream f(c.out_path);
    if (!f) throw cfed::ConfigError("out_path", "cannot write " + c.out_path);
    cfed::write_rows_csv(f, res.rows, timing);
  }
  {
    std::ofstream f(summary_path);
    cfed::write_summary_csv(f, cfed::summarize(res.rows));
  }
  {
    std::ofstream f(manifest_path);
    f << cfed::run_manifest(c, res, c.out_path, summary_path).dump(2) << '\n';
  }
  std::cerr << "wrote " << c.out_path << ", " << summary_path << ", " << manifest_path << '\n';
  if (res.interrupted) {
    std::cerr << "interrupted: " << res.tasks_done << " of " << res.tasks_total << " cells written\n";
    return 130;
  }
  return 0;
}

int cmd_oracle(std::uint64_t seed, int size_limit, bool flip, int joint_seeds) {
  cfed::oracle::OracleSuiteOptions o;
  o.seed = seed;
  o.size_limit = size_limit;
  o.flip_sinr_sign = flip;
  o.joint_seeds = joint_seeds;
  o.on_joint = [](int i, double h, double e, bool hs, bool es) {
    auto show = [](bool ok, double v) {
      char b[32];
      if (ok) std::snprintf(b, sizeof b, "%.9e J", v);
      else std::snprintf(b, sizeof b, "infeasible");
      return std::string(b);
    };
    std::cout << "joint seed " << i << "  rate " << cfed::oracle::tiny_rate_mbps(i) << " Mbit/s  heuristic "
              << show(hs, h) << "  exact " << show(es, e) << '\n';
  };
  const auto report = cfed::oracle::run_oracle_suite(o);
  cfed::oracle::print_report(std::cout, report);
  return report.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-minimizing federation and CSP activation for cell-free massive MIMO"};
  app.set_version_flag("--version", std::string(CFED_VERSION));
  app.require_subcommand(0, 1);

  std::string config_path;
  bool show_params = false;
  bool timing = false;
  unsigned threads = 0;
  Overrides o;
  std::uint64_t seed = 0;
  int drops = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  app.add_option("--config", config_path, "JSON configuration; missing fields take their defaults")
      ->check(CLI::ExistingFile);
  app.add_flag("--show-params", show_params, "Print the effective configuration and exit");
  app.add_option("--csps", o.csps, "CSP count(s)")->expected(1, -1);
  app.add_option("--antennas", o.antennas, "Antennas per CSP")->expected(1, -1);
  app.add_option("--federations", o.federations, "Federation count(s)")->expected(1, -1);
  app.add_option("--rate-mbps", o.rates_mbps, "Per-UE rate requirement(s) in Mbit/s")->expected(1, -1);
  auto* drops_opt = app.add_option("--drops", drops, "Monte Carlo drops per configuration");
  auto* out_opt = app.add_option("--out", out, "Output path");
  app.add_flag("--timing", timing, "Fill the wall_time_s column");
  app.add_option("--threads", threads, "Worker threads for sweeps (0: all cores)");

  auto* run = app.add_subcommand("run", "Solve one drop and print the solution as JSON");
  std::string dump_path;
  run->add_option("--dump-milp", dump_path, "Also write the first assignment MILP to this file");
  auto* sweep = app.add_subcommand("sweep", "Rate / CSP / antenna sweep over Monte Carlo drops");
  auto* feds = app.add_subcommand("federations", "Federation-count sweep with tau_p = K / F");
  auto* orc = app.add_subcommand("oracle", "Check the solvers against brute-force and closed-form oracles");
  int size_limit = 14;
  bool flip = false;
  int joint_seeds = 50;
  orc->add_option("--size-limit", size_limit, "Binaries per enumerated MILP (at most 16)");
  orc->add_flag("--flip-sinr-sign", flip, "Mutation check: negate every SINR threshold");
  orc->add_option("--joint-seeds", joint_seeds, "Tiny deployments for the joint check");
  auto* dump = app.add_subcommand("dump-milp", "Write the first assignment MILP in sparse triplet text");
  for (auto* sub : {run, sweep, feds, orc, dump}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) o.seed = seed;
  if (*drops_opt) o.drops = drops;
  if (*out_opt) o.out = out;

  try {
    const nlohmann::json raw = config_path.empty() ? nlohmann::json::object() : read_json_file(config_path);
    cfed::ExperimentConfig cfg = load_config(raw, o);
    if (*feds) {
      const bool axis_given = !o.federations.empty() || (raw.contains("sweep") && raw["sweep"].contains("federation_counts"));
      if (!axis_given) cfg.sweep.federation_counts = {1, 2, 3, 4};
      if (cfg.scenario.pilot_len != 0) std::cerr << "federations: pilot_len forced to K / F\n";
      cfg.scenario.pilot_len = 0;
      if (!o.out && !raw.contains("out_path")) cfg.out_path = "federations.csv";
    }
    if (show_params) {
      std::cout << nlohmann::json(cfg).dump(2) << '\n';
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    if (*run) return cmd_run(cfg, dump_path, o.out.has_value(), timing);
    if (*sweep || *feds) return cmd_sweep(cfg, timing, threads);
    if (*orc) return cmd_oracle(o.seed.value_or(1), size_limit, flip, joint_seeds);
    if (*dump) {
      cfg.validate();
      write_milp(o.out.value_or("-"), first_assignment_milp(problem_for(cfg), cfg.solver).milp);
      return 0;
    }
  } catch (const cfed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cfed::StructuralInfeasibility& e) {
    std::cerr << "structurally infeasible: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
