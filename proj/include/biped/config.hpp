// Copyright 2026 The biped-icpm Authors
//
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

#ifndef BIPED_CONFIG_HPP
#define BIPED_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biped/icpm.hpp"
#include "biped/model.hpp"
#include "biped/sim.hpp"
#include "biped/vhc.hpp"

namespace biped {

/// Everything one pipeline run needs. Defaults reproduce the five-link case.
struct RunConfig {
  BipedParams biped = BipedParams::five_link();
  VhcParams vhc = VhcParams::five_link_table();
  /// Free parameters for `gait solve`, e.g. {"G2", "a5"}.
  std::vector<std::string> refine;

  double anchor_q2 = kPi / 8.0;
  double anchor_dq2 = -5.0 * kPi / 3.0;
  /// Zero-dynamics interval; lo == hi selects +-(theta1_init + 0.1).
  double interval_lo = 0.0;
  double interval_hi = 0.0;

  double kp = 750.0;
  double kd = 25.0;
  ImpulseMode impulse_mode = ImpulseMode::kIdeal;
  double hg_lambda = 1.0;
  double hg_mu = 5e-4;
  double hg_stop_tol = 1e-4;

  double section_q2 = kPi / 16.0;
  double q_angle = 1.0;
  double q_velocity = 1.5;
  double r_weight = 1.0;
  double fd_step = 1e-6;

  SwingOptions swing;
  int steps = 40;
  double sample_dt = 0.01;
  bool icpm = true;
  std::uint64_t seed = 1;
  double perturb = 0.0;

  std::string output_dir = "out";

  void validate() const;
};

/// Parses the sectioned key = value format. Missing keys keep their
/// defaults; unknown keys and malformed values throw ValidationError naming
/// the key path, e.g. "[biped].m".
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

/// Writes every field with round-trip precision.
void write_config(std::ostream& os, const RunConfig& cfg);

/// Reads only the [vhc] section of a config file.
VhcParams load_vhc(const std::string& path);

/// Assembled pipeline objects.
Walker make_walker(const RunConfig& cfg, const VhcParams& vhc);
StepSystem make_step_system(const RunConfig& cfg, const VhcParams& vhc);
ZeroDynamics make_zero_dynamics(const RunConfig& cfg, const VhcParams& vhc);
SimConfig make_sim_config(const RunConfig& cfg);
std::vector<FreeParameter> refine_parameters(const RunConfig& cfg);

}  // namespace biped

#endif  // BIPED_CONFIG_HPP
