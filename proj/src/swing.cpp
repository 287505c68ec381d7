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

#include "biped/swing.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "biped/errors.hpp"

namespace biped {

namespace {

void emit_samples(Sampler* sampler, const DenseStepper& stepper, double t_start, double t_end) {
  if (sampler == nullptr || !(sampler->dt > 0.0)) return;
  while (sampler->next <= t_start + t_end + 1e-15) {
    const double local = sampler->next - t_start;
    if (local < stepper.t_prev() - 1e-15) {
      sampler->next += sampler->dt;
      continue;
    }
    sampler->samples.push_back({sampler->next, State::unpack(stepper.interpolate(local))});
    sampler->next += sampler->dt;
  }
}

}  // namespace

SwingResult integrate_swing(const Walker& walker, const State& x0, const SwingTarget& target,
                            Sampler* sampler, double t_start) {
  const Biped& biped = walker.biped;
  const SwingOptions& opt = walker.options;
  const int n = biped.dof();

  auto rhs = [&](const Eigen::VectorXd& p, Eigen::VectorXd& dp, double) {
    dp = closed_loop_dynamics(biped, walker.gait, walker.gains, State::unpack(p));
  };
  auto foot_height = [&](const Eigen::VectorXd& p) {
    return biped.swing_foot(State::unpack(p)).y();
  };
  auto foot_vspeed = [&](const Eigen::VectorXd& p) {
    return biped.swing_foot_velocity(State::unpack(p)).y();
  };
  auto section_gap = [&](const Eigen::VectorXd& p) { return p(n - 1) - target.section_q2; };

  if (sampler != nullptr && sampler->samples.empty() && sampler->next <= t_start) {
    sampler->samples.push_back({t_start, x0});
    sampler->next = t_start + sampler->dt;
  }

  SwingResult res;
  // A section at the post-impact configuration is crossed immediately.
  if (target.goal == SwingGoal::kSection && std::abs(section_gap(x0.packed())) <= 1e-8 &&
      x0.dq2() < 0.0) {
    res.exit = x0;
    return res;
  }
  std::optional<TimedState> crossing;  // latest downward zero crossing of the foot height
  try {
    DenseStepper stepper(rhs, x0.packed(), 0.0, opt.ode);
    while (true) {
      const Eigen::VectorXd xa = stepper.x();
      stepper.step();
      ++res.steps;
      const Eigen::VectorXd& xb = stepper.x();
      if (!xb.allFinite()) throw StepFailure("integration failure: non-finite state");

      std::optional<double> t_event;
      if (target.goal == SwingGoal::kSection) {
        const double ga = section_gap(xa), gb = section_gap(xb);
        if (ga > 0.0 && gb <= 0.0 && xb(2 * n - 1) < 0.0) {
          t_event = locate_root(stepper, section_gap, ga);
          res.event = SwingExit::kSection;
        }
      } else if (xa(n - 1) < target.arm_q2) {
        const double ha = foot_height(xa), hb = foot_height(xb);
        if (ha > 0.0 && hb <= 0.0) {
          const double tc = locate_root(stepper, foot_height, ha);
          crossing = TimedState{tc, State::unpack(stepper.interpolate(tc))};
        }
        const double va = foot_vspeed(xa), vb = foot_vspeed(xb);
        std::optional<double> t_min;
        if (va < 0.0 && vb >= 0.0) t_min = locate_root(stepper, foot_vspeed, va);
        if (t_min && std::abs(foot_height(stepper.interpolate(*t_min))) <= opt.graze_depth) {
          t_event = *t_min;
          res.event = SwingExit::kGraze;
        } else if (crossing && (hb < -opt.graze_depth || t_min)) {
          // Penetration beyond the graze band: impact where the foot met the ground.
          emit_samples(sampler, stepper, t_start, crossing->t);
          res.exit = crossing->x;
          res.duration = crossing->t;
          res.event = SwingExit::kStrike;
          return res;
        }
      }

      if (t_event) {
        emit_samples(sampler, stepper, t_start, *t_event);
        res.exit = State::unpack(stepper.interpolate(*t_event));
        res.duration = *t_event;
        return res;
      }
      emit_samples(sampler, stepper, t_start, stepper.t());

      const double q2 = xb(n - 1), dq2 = xb(2 * n - 1);
      std::ostringstream why;
      if (dq2 >= 0.0) {
        why << "q2 velocity reversal at t = " << stepper.t() << " (q2 = " << q2 << ")";
      } else if (q2 < opt.q2_lo || q2 > opt.q2_hi) {
        why << "fall: q2 = " << q2 << " left the operating interval";
      } else if (res.steps >= opt.step_budget) {
        why << "step budget exhausted";
      } else if (stepper.t() > opt.max_duration) {
        why << "swing exceeded " << opt.max_duration << " s";
      }
      if (!why.str().empty()) throw StepFailure(why.str());
    }
  } catch (const NumericalError& e) {
    throw StepFailure(std::string("integration failure: ") + e.what());
  }
}

const char* to_string(SwingExit e) {
  switch (e) {
    case SwingExit::kStrike:
      return "strike";
    case SwingExit::kGraze:
      return "graze";
    default:
      return "section";
  }
}

}  // namespace biped
