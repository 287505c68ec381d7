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

#ifndef BIPED_TESTS_FIXTURE_HPP
#define BIPED_TESTS_FIXTURE_HPP

#include <random>

#include "biped/control.hpp"
#include "biped/icpm.hpp"
#include "biped/model.hpp"
#include "biped/vhc.hpp"
#include "biped/zerodyn.hpp"

namespace biped::testing {

// Published parameters re-solved so that the gait conditions hold to
// machine precision.
inline const VhcParams& refined_gait() {
  static const VhcParams p = [] {
    const std::vector<FreeParameter> free = {FreeParameter::parse("G2"),
                                             FreeParameter::parse("G4"),
                                             FreeParameter::parse("G5"),
                                             FreeParameter::parse("a5")};
    return solve_parameters(BipedParams::five_link(), VhcParams::five_link_table(), free).params;
  }();
  return p;
}

inline Walker five_link_walker() {
  return Walker{Biped(BipedParams::five_link()), Gait(refined_gait()),
                ContinuousGains::uniform(4, 750.0, 25.0), SwingOptions{}};
}

inline StepSystem five_link_system() { return StepSystem{five_link_walker(), Section{}}; }

inline ZeroDynamics five_link_zero_dynamics() {
  return ZeroDynamics(Biped(BipedParams::five_link()), Gait(refined_gait()));
}

inline const double kAnchorQ2 = kPi / 8.0;
inline const double kAnchorDq2 = -5.0 * kPi / 3.0;

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace biped::testing

#endif  // BIPED_TESTS_FIXTURE_HPP
