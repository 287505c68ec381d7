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

#ifndef BIPED_ANGLES_HPP
#define BIPED_ANGLES_HPP

#include <Eigen/Dense>
#include <numbers>

namespace biped {

inline constexpr double kPi = std::numbers::pi;

/// Maps an angle to (-pi, pi].
double wrap_angle(double a);

Eigen::VectorXd wrap_angles(const Eigen::VectorXd& a);

/// Smallest signed difference a - b on the circle, in (-pi, pi].
inline double angle_diff(double a, double b) { return wrap_angle(a - b); }

}  // namespace biped

#endif  // BIPED_ANGLES_HPP
