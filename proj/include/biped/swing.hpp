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

#ifndef BIPED_SWING_HPP
#define BIPED_SWING_HPP

#include <vector>

#include "biped/angles.hpp"
#include "biped/control.hpp"
#include "biped/model.hpp"
#include "biped/ode.hpp"
#include "biped/vhc.hpp"

namespace biped {

struct SwingOptions {
  OdeOptions ode;
  /// Contacts whose foot-height minimum stays within +-graze_depth of the
  /// ground resolve at that minimum; deeper penetration resolves at the
  /// downward zero crossing of the foot height.
  double graze_depth = 1e-3;
  int step_budget = 200000;
  double max_duration = 5.0;
  /// Leaving [q2_lo, q2_hi] during a swing is a fall.
  double q2_lo = -kPi / 2.0;
  double q2_hi = kPi / 2.0;
};

/// Everything the swing flow depends on.
struct Walker {
  Biped biped;
  Gait gait;
  ContinuousGains gains;
  SwingOptions options;
};

enum class SwingGoal { kTouchdown, kSection };
enum class SwingExit { kStrike, kGraze, kSection };

struct SwingTarget {
  SwingGoal goal = SwingGoal::kTouchdown;
  /// Section coordinate for kSection; crossed with decreasing q2.
  double section_q2 = 0.0;
  /// Touchdown detection starts once q2 < arm_q2 (past midstance, where the
  /// designed gait's swing foot grazes the ground).
  double arm_q2 = 0.0;
};

struct TimedState {
  double t;
  State x;
};

/// Collects states at a fixed sampling interval in absolute time.
struct Sampler {
  double dt = 0.01;
  double next = 0.0;
  std::vector<TimedState> samples;
};

struct SwingResult {
  State exit;
  double duration = 0.0;
  SwingExit event = SwingExit::kSection;
  int steps = 0;
};

/// Integrates the closed-loop swing (u = u_c) from x0 until the target event.
/// Throws StepFailure on dq2 sign reversal, leaving the operating interval,
/// budget exhaustion or integration failure.
SwingResult integrate_swing(const Walker& walker, const State& x0, const SwingTarget& target,
                            Sampler* sampler = nullptr, double t_start = 0.0);

const char* to_string(SwingExit e);

}  // namespace biped

#endif  // BIPED_SWING_HPP
