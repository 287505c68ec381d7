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

#ifndef BIPED_SIM_HPP
#define BIPED_SIM_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biped/control.hpp"
#include "biped/icpm.hpp"

namespace biped {

enum class ImpulseMode { kIdeal, kHighGain };

ImpulseMode parse_impulse_mode(const std::string& s);
const char* to_string(ImpulseMode m);

struct SimConfig {
  int steps = 40;
  ImpulseMode mode = ImpulseMode::kIdeal;
  HighGainConfig high_gain;
  bool icpm = true;
  /// Trajectory sampling interval, s; <= 0 disables the trajectory log.
  double sample_dt = 0.01;

  void validate(int actuated) const;
};

struct StepRecord {
  int k = 0;
  Eigen::VectorXd z;        // on the section, before the impulse
  Eigen::VectorXd impulse;
  double norm_e = 0.0;      // ||z - z_star||, angles wrapped
  double duration = 0.0;    // section to section
  State touchdown;
  SwingExit touchdown_event = SwingExit::kStrike;
  Eigen::Vector2d ground_impulse = Eigen::Vector2d::Zero();
  double kinetic_before = 0.0;  // at touchdown, before/after impact
  double kinetic_after = 0.0;
  double energy_start = 0.0;
  double energy_end = 0.0;
  double impact_constraint = 0.0;  // ||Gamma dqe+||
};

struct TrajectoryLog {
  std::vector<double> t;
  std::vector<State> x;
};

struct RunResult {
  std::vector<StepRecord> steps;
  TrajectoryLog trajectory;
  std::vector<Eigen::VectorXd> section_states;  // z(0), ..., z(N)
  /// Set when the run stopped early on a StepFailure.
  std::optional<std::string> failure;
  double elapsed = 0.0;
};

/// One impulse-swing-impact-relabel-swing cycle from a state on the section.
/// `controller` == nullptr applies no impulse.
StepRecord execute_step(const StepSystem& sys, const IcpmController* controller,
                        const Eigen::VectorXd& z_star, const SimConfig& cfg, const State& x,
                        State* next, Sampler* sampler = nullptr, double t_start = 0.0);

/// N consecutive steps. A StepFailure on the first step propagates; later
/// failures end the run with `failure` set.
RunResult run_gait(const StepSystem& sys, const IcpmController* controller,
                   const Eigen::VectorXd& z_star, const SimConfig& cfg, const State& x0);

/// CSV with columns t, theta1..n, q2, q1_1..q1_{n-1}, dq1_1..dq1_{n-1}, dq2,
/// rho1..rho_{n-1}, E.
void write_trajectory_csv(std::ostream& os, const Biped& biped, const Gait& gait,
                          const TrajectoryLog& log);
/// CSV with columns k, dur, norm_e, I_1..I_{n-1}, Ig_x, Ig_y, dT_impact.
void write_steps_csv(std::ostream& os, const std::vector<StepRecord>& steps);

}  // namespace biped

#endif  // BIPED_SIM_HPP
