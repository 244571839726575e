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

// Hardware energy model of CSPs and ECSPs over one coherence block.
//
// All energies are in Joules per coherence block; powers in Watts. The
// block lasts tau_c / f_BB seconds, which converts block energy into the
// block-average consumed power reported by the experiments.

#include <cmath>
#include <string>

#include <json.hpp>

#include "cfed/assignment.hpp"
#include "cfed/error.hpp"

namespace cfed {

struct EnergyParams {
  double eta_max = 0.34;
  double pt_max_w = 3.0;
  double pa_exponent = 0.5;
  double fom_w = 34.4e-15;  // J per conversion step
  int dac_bits = 12;
  double fs_hz = 600e6;
  double f_bb_hz = 20e6;
  double p_eth_w = 7.0;
  double p_sync_w = 2.2;
  double e_mac_j = 3.1e-12;
  double e_sram_j = 5e-12;
  double e_dram_j = 640e-12;
  double zeta = 1.2;
  double alpha_sram = 0.10;
  double gamma_dram = 0.01;

  void validate(const std::string& path = "energy") const {
    auto positive = [&](double v, const char* name) {
      if (!(v > 0)) throw ConfigError(path + "." + name, "must be positive");
    };
    if (!(eta_max > 0 && eta_max <= 1)) throw ConfigError(path + ".eta_max", "must lie in (0, 1]");
    positive(pt_max_w, "pt_max_w");
    if (!(pa_exponent >= 0.4 && pa_exponent <= 0.5))
      throw ConfigError(path + ".pa_exponent", "must lie in [0.4, 0.5]");
    positive(fom_w, "fom_w");
    if (dac_bits < 1) throw ConfigError(path + ".dac_bits", "must be >= 1");
    positive(fs_hz, "fs_hz");
    positive(f_bb_hz, "f_bb_hz");
    positive(p_eth_w, "p_eth_w");
    positive(p_sync_w, "p_sync_w");
    positive(e_mac_j, "e_mac_j");
    positive(e_sram_j, "e_sram_j");
    positive(e_dram_j, "e_dram_j");
    positive(zeta, "zeta");
    positive(alpha_sram, "alpha_sram");
    positive(gamma_dram, "gamma_dram");
  }
};

/// Per-CSP energy over one coherence block, split by hardware block.
struct EnergyBreakdown {
  double e_op = 0;    // J per DSP operation
  double e_ce = 0;    // channel estimation
  double e_lp = 0;    // linear processing
  double e_pa = 0;    // power amplifier during payload
  double e_dac = 0;   // converters over the whole block
  double e_ecsp = 0;  // fronthaul port + White Rabbit core
  double per_csp_static = 0;  // E_CSP - E_PA
  double total_j = 0;         // E_CSP
  double avg_power_w = 0;
};

/// PA supply power (1/eta) (Pmax/Pt)^beta Pt; with beta = 0.5 this is
/// sqrt(Pmax) sqrt(Pt) / eta.
inline double pa_power(double p_t, const EnergyParams& p) {
  if (p_t < 0 || p_t > p.pt_max_w) throw Error("pa_power: transmit power outside [0, P_t,max]");
  if (p_t == 0) return 0.0;
  return std::pow(p.pt_max_w / p_t, p.pa_exponent) * p_t / p.eta_max;
}

inline double op_energy(const EnergyParams& p) {
  return p.zeta * (p.e_mac_j + p.alpha_sram * p.e_sram_j + p.gamma_dram * p.e_dram_j);
}

inline double dac_power(const EnergyParams& p) { return p.fom_w * std::ldexp(1.0, p.dac_bits) * p.fs_hz; }

inline double block_duration_s(const EnergyParams& p, int coherence_len) { return coherence_len / p.f_bb_hz; }

inline double ecsp_energy(const EnergyParams& p, int coherence_len) {
  return (p.p_eth_w + p.p_sync_w) * block_duration_s(p, coherence_len);
}

inline EnergyBreakdown csp_block_energies(const EnergyParams& p, int antennas, int ues_served, int coherence_len,
                                          int pilot_len, double p_t) {
  if (pilot_len >= coherence_len) throw Error("csp_block_energies: pilot_len must be < coherence_len");
  if (ues_served < 0) throw Error("csp_block_energies: negative UE count");
  EnergyBreakdown e;
  e.e_op = op_energy(p);
  const double mk = 2.0 * antennas * ues_served * e.e_op;
  e.e_ce = mk * pilot_len;
  e.e_lp = mk * (coherence_len - pilot_len);
  e.e_pa = pa_power(p_t, p) * (coherence_len - pilot_len) / p.f_bb_hz;
  e.e_dac = antennas * dac_power(p) * block_duration_s(p, coherence_len);
  e.e_ecsp = ecsp_energy(p, coherence_len);
  e.total_j = e.e_lp + e.e_ce + e.e_pa + e.e_ecsp + e.e_dac;
  e.per_csp_static = e.total_j - e.e_pa;
  e.avg_power_w = e.total_j / block_duration_s(p, coherence_len);
  return e;
}

/// Constants of the federation objective: activation cost per CSP and ECSP
/// and the PA coefficient multiplying sqrt(sum_f rho^2). Each CSP's DSP load
/// is charged for tau_p served UEs so the activation cost is a constant.
struct ObjectiveCoefficients {
  double csp_static_j = 0;
  double ecsp_j = 0;
  double pa_per_sqrt_w = 0;  // (tau_c - tau_p) / f_BB * sqrt(P_t,max) / eta_max
  double block_s = 0;
};

inline ObjectiveCoefficients objective_coefficients(const EnergyParams& p, int antennas, int coherence_len,
                                                    int pilot_len) {
  ObjectiveCoefficients c;
  c.csp_static_j = csp_block_energies(p, antennas, pilot_len, coherence_len, pilot_len, 0.0).per_csp_static;
  c.ecsp_j = ecsp_energy(p, coherence_len);
  c.pa_per_sqrt_w = (coherence_len - pilot_len) / p.f_bb_hz * std::sqrt(p.pt_max_w) / p.eta_max;
  c.block_s = block_duration_s(p, coherence_len);
  return c;
}

struct EnergyTotal {
  double total_j = 0;
  double avg_power_w = 0;
};

/// Total block energy: csp_static * sum(y) + ecsp * sum(z)
/// + pa_coeff * sum_s sqrt(sum_f rho(s, f)^2).
inline EnergyTotal objective_energy(const Assignment& a, const PowerAllocation& pw, const ObjectiveCoefficients& c) {
  EnergyTotal t;
  const double pa = pw.rho.rows() > 0 ? pw.rho.rowwise().norm().sum() : 0.0;
  t.total_j = c.csp_static_j * a.y.sum() + c.ecsp_j * a.z.sum() + c.pa_per_sqrt_w * pa;
  t.avg_power_w = t.total_j / c.block_s;
  return t;
}

inline EnergyTotal objective_energy(const Assignment& a, const PowerAllocation& pw, const EnergyParams& p,
                                    int antennas, int coherence_len, int pilot_len) {
  return objective_energy(a, pw, objective_coefficients(p, antennas, coherence_len, pilot_len));
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EnergyParams, eta_max, pt_max_w, pa_exponent, fom_w, dac_bits, fs_hz,
                                                f_bb_hz, p_eth_w, p_sync_w, e_mac_j, e_sram_j, e_dram_j, zeta,
                                                alpha_sram, gamma_dram)

}  // namespace cfed
