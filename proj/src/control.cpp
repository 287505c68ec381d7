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

#include "biped/control.hpp"

#include <cmath>

#include "biped/errors.hpp"
#include "biped/hybrid.hpp"

namespace biped {

ContinuousGains ContinuousGains::uniform(int actuated, double kp, double kd) {
  return {kp * Eigen::MatrixXd::Identity(actuated, actuated),
          kd * Eigen::MatrixXd::Identity(actuated, actuated)};
}

void ContinuousGains::validate() const {
  if (kp.rows() != kp.cols() || kd.rows() != kd.cols() || kp.rows() != kd.rows()) {
    throw ValidationError("[controller]: kp and kd must be square and of equal size");
  }
  if ((kp.diagonal().array() <= 0.0).any()) {
    throw ValidationError("[controller].kp: diagonal entries must be positive");
  }
  if ((kd.diagonal().array() <= 0.0).any()) {
    throw ValidationError("[controller].kd: diagonal entries must be positive");
  }
}

Eigen::VectorXd vhc_control(const Biped& biped, const Gait& gait, const ContinuousGains& gains,
                            const State& x) {
  const int n = biped.dof();
  const double q2 = x.q2();
  const double dq2 = x.dq2();
  const auto [rho, drho] = manifold_residual(gait, x);
  const Eigen::VectorXd dphi = gait.phi_prime(q2);
  // Required rho-independent part of q1'' - Phi' q2''.
  const Eigen::VectorXd w =
      -gains.kd * drho - gains.kp * rho + gait.phi_double_prime(q2) * dq2 * dq2;

  const Eigen::MatrixXd M = biped.mass_matrix(x.q);
  const Eigen::VectorXd h = biped.bias_forces(x.q, x.dq);
  const auto M11 = M.topLeftCorner(n - 1, n - 1);
  const auto M12 = M.topRightCorner(n - 1, 1);
  const double den = M12.col(0).dot(dphi) + M(n - 1, n - 1);
  if (std::abs(den) < 1e-12) {
    throw NumericalError("controller undefined: singular decoupling matrix");
  }
  const double ddq2 = (-h(n - 1) - M12.col(0).dot(w)) / den;
  const Eigen::VectorXd ddq1 = dphi * ddq2 + w;
  return M11 * ddq1 + M12.col(0) * ddq2 + h.head(n - 1);
}

Eigen::VectorXd closed_loop_dynamics(const Biped& biped, const Gait& gait,
                                     const ContinuousGains& gains, const State& x) {
  return biped.swing_dynamics(x, vhc_control(biped, gait, gains, x));
}

State apply_impulse_ideal(const Biped& biped, const State& x, const Eigen::VectorXd& impulse) {
  return impulse_jump(biped, x, impulse);
}

void HighGainConfig::validate() const {
  if (!(mu > 0.0)) throw ValidationError("[controller].mu: must be positive");
  if (!(stop_tol > 0.0)) throw ValidationError("[controller].stop_tol: must be positive");
  if (lambda.rows() != lambda.cols()) {
    throw ValidationError("[controller].lambda: must be square");
  }
}

HighGainResult apply_impulse_highgain(const Biped& biped, const HighGainConfig& hg,
                                      const State& x, const Eigen::VectorXd& dq1_change,
                                      const OdeOptions& ode) {
  hg.validate();
  const int n = biped.dof();
  if (dq1_change.size() != n - 1 || hg.lambda.rows() != n - 1) {
    throw ValidationError("apply_impulse_highgain: dimension mismatch");
  }
  const Eigen::VectorXd target = x.dq1() + dq1_change;
  auto error_norm = [&](const Eigen::VectorXd& packed) {
    return (packed.segment(n, n - 1) - target).norm();
  };

  HighGainResult out;
  out.post = x;
  if (dq1_change.norm() < hg.stop_tol) return out;

  // Joint accelerations are assigned directly, ddq1 = -(1/mu) Lambda e; the
  // passive row then fixes ddq2 and the torque follows from the actuated rows.
  auto rhs = [&](const Eigen::VectorXd& p, Eigen::VectorXd& dp, double) {
    const State s = State::unpack(p);
    const Eigen::MatrixXd M = biped.mass_matrix(s.q);
    const Eigen::VectorXd h = biped.bias_forces(s.q, s.dq);
    const Eigen::VectorXd v = -hg.lambda * (s.dq1() - target) / hg.mu;
    const double ddq2 = -(h(n - 1) + M.row(n - 1).head(n - 1).dot(v)) / M(n - 1, n - 1);
    dp.resize(2 * n);
    dp << s.dq, v, ddq2;
  };
  OdeOptions o = ode;
  o.max_step = std::min(o.max_step, hg.mu);
  o.initial_step = std::min(o.initial_step, hg.mu * 1e-2);
  DenseStepper stepper(rhs, x.packed(), 0.0, o);

  const double limit = 100.0 * hg.mu * std::abs(std::log(hg.stop_tol));
  auto g = [&](const Eigen::VectorXd& p) { return error_norm(p) - hg.stop_tol; };
  while (true) {
    const double g_prev = g(stepper.x());
    stepper.step();
    const double g_now = g(stepper.x());
    if (g_now <= 0.0) {
      const double tc = locate_root(stepper, g, g_prev);
      out.duration = tc;
      out.post = State::unpack(stepper.interpolate(tc));
      // The root estimate may sit a hair above the threshold.
      if (g(out.post.packed()) > 0.0) {
        out.duration = stepper.t();
        out.post = State::unpack(stepper.x());
      }
      out.samples.emplace_back(out.duration, out.post);
      return out;
    }
    out.samples.emplace_back(stepper.t(), State::unpack(stepper.x()));
    if (stepper.t() > limit) throw NumericalError("high-gain stall");
  }
}

}  // namespace biped
