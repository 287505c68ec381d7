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

#ifndef BIPED_HYBRID_HPP
#define BIPED_HYBRID_HPP

#include <Eigen/Dense>
#include <string>

#include "biped/model.hpp"

namespace biped {

/// Velocity jump from an impulsive joint input: solves M dq_jump = (I, 0).
State impulse_jump(const Biped& biped, const State& pre, const Eigen::VectorXd& impulse);

struct ImpactResult {
  State post;
  /// Impulse of the ground force on the swing foot, (horizontal, vertical).
  Eigen::Vector2d ground_impulse;
  /// Post-impact extended velocity (q rows then stance foot rows).
  Eigen::VectorXd dqe_post;
};

/// Inelastic swing-foot/ground collision with the stance foot at rest before
/// contact. Throws NumericalError on a singular saddle system.
ImpactResult impact_map(const Biped& biped, const State& pre);

/// Affine relabelling x+ = blockdiag(V, V) x + (Pi, 0).
struct RelabelMap {
  Eigen::MatrixXi V;
  Eigen::VectorXd Pi;
};

RelabelMap relabel_map(int n);

/// Swaps stance and swing legs. Output angles are wrapped to (-pi, pi].
State relabel(const State& pre);

enum class GuardClass { kNone, kS1, kS2 };

struct GuardInfo {
  double gamma_y = 0.0;
  Eigen::Vector2d dgamma = Eigen::Vector2d::Zero();
  GuardClass classification = GuardClass::kNone;
  /// Non-empty for contact states that fit neither guard set.
  std::string diagnostic;
};

struct GuardTolerances {
  double position = 1e-10;  // |gamma_y| band
  double velocity = 1e-6;   // impact-free foot speed
};

GuardInfo guard_values(const Biped& biped, const State& x,
                       const GuardTolerances& tol = {});

const char* to_string(GuardClass c);

}  // namespace biped

#endif  // BIPED_HYBRID_HPP
