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

#ifndef BIPED_CONTROL_HPP
#define BIPED_CONTROL_HPP

#include <Eigen/Dense>
#include <vector>

#include "biped/model.hpp"
#include "biped/ode.hpp"
#include "biped/vhc.hpp"

namespace biped {

struct ContinuousGains {
  Eigen::MatrixXd kp;
  Eigen::MatrixXd kd;

  static ContinuousGains uniform(int actuated, double kp, double kd);
  void validate() const;
};

/// Input-output linearizing control for the output rho = q1 - Phi(q2):
/// assigns rho'' = -kd rho' - kp rho. Throws NumericalError ("controller
/// undefined") where M12^T Phi' + M22 vanishes.
Eigen::VectorXd vhc_control(const Biped& biped, const Gait& gait, const ContinuousGains& gains,
                            const State& x);

/// Closed-loop swing vector field (dq, ddq) under vhc_control.
Eigen::VectorXd closed_loop_dynamics(const Biped& biped, const Gait& gait,
                                     const ContinuousGains& gains, const State& x);

/// Ideal impulsive actuation; same as impulse_jump.
State apply_impulse_ideal(const Biped& biped, const State& x, const Eigen::VectorXd& impulse);

struct HighGainConfig {
  Eigen::MatrixXd lambda;
  double mu = 5e-4;
  double stop_tol = 1e-4;

  void validate() const;
};

struct HighGainResult {
  State post;
  double duration = 0.0;
  /// (time since start, state) at each accepted integrator step.
  std::vector<std::pair<double, State>> samples;
};

/// Realizes a joint-velocity change with the high-gain law
/// ddq1 = -(1/mu) Lambda (dq1 - target), target = dq1 + dq1_change, applied
/// through the model until |dq1 - target| < stop_tol. Throws NumericalError
/// ("high-gain stall") past 100 mu |log stop_tol| seconds.
HighGainResult apply_impulse_highgain(const Biped& biped, const HighGainConfig& hg,
                                      const State& x, const Eigen::VectorXd& dq1_change,
                                      const OdeOptions& ode = {});

}  // namespace biped

#endif  // BIPED_CONTROL_HPP
