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

#ifndef BIPED_ZERODYN_HPP
#define BIPED_ZERODYN_HPP

#include <utility>
#include <vector>

#include "biped/model.hpp"
#include "biped/vhc.hpp"

namespace biped {

/// Passive-coordinate dynamics on the constraint manifold,
///   ddq2 = alpha1(q2) + alpha2(q2) dq2^2,
/// with integral of motion E = 0.5 Psi(q2) dq2^2 + P(q2), where
///   Psi(q2) = exp(-2 int_0^q2 alpha2),  P(q2) = -int_0^q2 Psi alpha1.
class ZeroDynamics {
 public:
  ZeroDynamics(Biped biped, Gait gait, double lo, double hi);
  /// Interval [-theta1_init - 0.1, theta1_init + 0.1].
  ZeroDynamics(Biped biped, Gait gait);

  const Biped& biped() const { return biped_; }
  const Gait& gait() const { return gait_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  /// Throws NumericalError ("zero dynamics undefined here") where the VHC is
  /// not regular.
  std::pair<double, double> alpha(double q2) const;

  /// (Psi(q2), P(q2)) by adaptive quadrature from the symmetry point.
  std::pair<double, double> psi_and_potential(double q2) const;
  double energy(double q2, double dq2) const;

  struct Extrema {
    double min = 0.0;
    double max = 0.0;
    double argmin = 0.0;
    double argmax = 0.0;
  };
  /// Extrema of P over [lo, hi]: grid scan plus bisection on P' = -Psi alpha1.
  Extrema potential_extrema(int grid_points = 2001) const;

  struct Sample {
    double q2, alpha1, alpha2, psi, potential;
  };
  /// Uniform grid over [lo, hi].
  std::vector<Sample> profile(int grid_points) const;

 private:
  Biped biped_;
  Gait gait_;
  double lo_;
  double hi_;
};

/// The hybrid orbit on the energy level through the anchor.
struct Orbit {
  double anchor_q2 = 0.0;
  double anchor_dq2 = 0.0;
  double energy_level = 0.0;
  ZeroDynamics::Extrema potential;
};

/// Throws ValidationError when energy_level <= P_max (q2 velocity would
/// change sign, the biped cannot complete a step).
Orbit make_orbit(const ZeroDynamics& zd, double anchor_q2, double anchor_dq2);

/// dq2 on the orbit at q2, with the sign of the anchor velocity. Throws
/// ValidationError ("orbit does not reach this q2") when c <= P(q2).
double orbit_velocity(const ZeroDynamics& zd, const Orbit& orbit, double q2);

/// q1 = Phi(q2), dq1 = Phi'(q2) dq2.
State lift_to_manifold(const Gait& gait, double q2, double dq2);

}  // namespace biped

#endif  // BIPED_ZERODYN_HPP
