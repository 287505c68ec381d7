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

#ifndef BIPED_ICPM_HPP
#define BIPED_ICPM_HPP

#include <Eigen/Dense>

#include "biped/swing.hpp"
#include "biped/zerodyn.hpp"

namespace biped {

/// Poincare section {q2 = q2_star, dq2 < 0}.
struct Section {
  double q2_star = kPi / 16.0;
};

/// Walker plus the section on which impulses are applied.
struct StepSystem {
  Walker walker;
  Section section;

  /// Touchdown arming threshold: halfway past midstance.
  double arm_q2() const { return -0.5 * std::abs(walker.gait.theta1_init()); }
  int dof() const { return walker.biped.dof(); }
};

/// z = (q1, dq1, dq2), 2n-1 entries.
Eigen::VectorXd to_section_state(const State& x);
State from_section_state(const Section& section, const Eigen::VectorXd& z);

/// z - z_star with the q1 entries wrapped to (-pi, pi].
Eigen::VectorXd section_error(const Eigen::VectorXd& z, const Eigen::VectorXd& z_star);

/// Diagnostics of one return-map evaluation.
struct StepTrace {
  State after_impulse;
  State touchdown;        // pre-impact
  State after_impact;
  State after_relabel;
  State next_on_section;
  Eigen::Vector2d ground_impulse = Eigen::Vector2d::Zero();
  SwingExit touchdown_event = SwingExit::kStrike;
  double swing_to_touchdown = 0.0;
  double swing_to_section = 0.0;
};

/// Impulse at the section, swing to touchdown, impact, relabel, swing to the
/// next section crossing. Throws StepFailure when the basin is left.
Eigen::VectorXd poincare_map(const StepSystem& sys, const Eigen::VectorXd& z,
                             const Eigen::VectorXd& impulse, StepTrace* trace = nullptr);

/// z_star from the orbit's velocity at the section, verified against the map.
/// Throws NumericalError ("orbit/section inconsistent") if the residual
/// exceeds `tolerance`.
Eigen::VectorXd find_fixed_point(const StepSystem& sys, const ZeroDynamics& zd,
                                 const Orbit& orbit, double tolerance = 1e-6);

struct LinearizeOptions {
  double state_step = 1e-6;
  double impulse_step = 1e-6;
  bool parallel = true;
};

struct Linearization {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
};

/// Central finite differences of the map about (z_star, 0).
Linearization linearize(const StepSystem& sys, const Eigen::VectorXd& z_star,
                        const LinearizeOptions& options = {});

int controllability_rank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         double tol = 1e-9);

double spectral_radius(const Eigen::MatrixXd& A);

struct LqrOptions {
  double tolerance = 1e-12;
  int max_iterations = 100000;
};

/// K = -(R + B'PB)^{-1} B'PA with P from the discrete Riccati recursion
/// started at P = Q. Throws NumericalError ("unstabilizable pair") on
/// divergence or an unstable closed loop.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         const LqrOptions& options = {});

/// Q = blockdiag(angle_weight I_{n-1}, velocity_weight I_n), R = r I_{n-1}.
Eigen::MatrixXd section_weight_q(int n, double angle_weight, double velocity_weight);

struct IcpmController {
  Eigen::VectorXd z_star;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd K;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
};

/// I = K (z - z_star), angle errors wrapped.
Eigen::VectorXd impulse_feedback(const IcpmController& ctl, const Eigen::VectorXd& z);

}  // namespace biped

#endif  // BIPED_ICPM_HPP
