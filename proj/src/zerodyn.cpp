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

#include "biped/zerodyn.hpp"

#include <cmath>
#include <sstream>

#include "biped/errors.hpp"
#include "biped/ode.hpp"

namespace biped {

namespace {

OdeOptions quadrature_options() {
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-12;
  o.max_step = 0.01;
  o.initial_step = 1e-4;
  return o;
}

}  // namespace

ZeroDynamics::ZeroDynamics(Biped biped, Gait gait, double lo, double hi)
    : biped_(std::move(biped)), gait_(std::move(gait)), lo_(lo), hi_(hi) {
  if (!(hi_ > lo_)) throw ValidationError("zero dynamics: empty operating interval");
  if (gait_.dof() != biped_.dof()) {
    throw ValidationError("zero dynamics: gait and biped dimensions differ");
  }
}

ZeroDynamics::ZeroDynamics(Biped biped, Gait gait)
    : ZeroDynamics(biped, gait, -std::abs(gait.theta1_init()) - 0.1,
                   std::abs(gait.theta1_init()) + 0.1) {}

std::pair<double, double> ZeroDynamics::alpha(double q2) const {
  const int n = biped_.dof();
  const Eigen::VectorXd dphi = gait_.phi_prime(q2);
  Eigen::VectorXd q(n);
  q << gait_.phi(q2), q2;
  const Eigen::MatrixXd M = biped_.mass_matrix(q);
  const double den = M.row(n - 1).head(n - 1).dot(dphi) + M(n - 1, n - 1);
  if (std::abs(den) < 1e-12) {
    std::ostringstream os;
    os << "zero dynamics undefined here: VHC not regular at q2 = " << q2;
    throw NumericalError(os.str());
  }
  Eigen::VectorXd dq(n);
  dq << dphi, 1.0;
  const double grav = biped_.gravity_forces(q)(n - 1);
  const double quad = biped_.bias_forces(q, dq)(n - 1) - grav;
  const double curv = M.row(n - 1).head(n - 1).dot(gait_.phi_double_prime(q2));
  return {-grav / den, -(quad + curv) / den};
}

std::pair<double, double> ZeroDynamics::psi_and_potential(double q2) const {
  // y = (int_0^s alpha2, P(s)).
  auto rhs = [this](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double s) {
    const auto [a1, a2] = alpha(s);
    dy.resize(2);
    dy(0) = a2;
    dy(1) = -std::exp(-2.0 * y(0)) * a1;
  };
  Eigen::VectorXd y = integrate(rhs, Eigen::VectorXd::Zero(2), 0.0, q2, quadrature_options());
  if (!y.allFinite()) throw NumericalError("zero dynamics: quadrature failure");
  return {std::exp(-2.0 * y(0)), y(1)};
}

double ZeroDynamics::energy(double q2, double dq2) const {
  const auto [psi, pot] = psi_and_potential(q2);
  return 0.5 * psi * dq2 * dq2 + pot;
}

std::vector<ZeroDynamics::Sample> ZeroDynamics::profile(int grid_points) const {
  if (grid_points < 2) throw ValidationError("profile: need at least 2 grid points");
  std::vector<Sample> out(grid_points);
  auto rhs = [this](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double s) {
    const auto [a1, a2] = alpha(s);
    dy.resize(2);
    dy(0) = a2;
    dy(1) = -std::exp(-2.0 * y(0)) * a1;
  };
  // Sweep outward from the symmetry point so each piece starts from the
  // previous quadrature state.
  auto sweep = [&](int first, int last, int dir) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
    double s_prev = 0.0;
    for (int i = first; i != last + dir; i += dir) {
      const double s = lo_ + (hi_ - lo_) * i / (grid_points - 1);
      y = integrate(rhs, y, s_prev, s, quadrature_options());
      if (!y.allFinite()) throw NumericalError("zero dynamics: quadrature failure");
      s_prev = s;
      const auto [a1, a2] = alpha(s);
      out[i] = {s, a1, a2, std::exp(-2.0 * y(0)), y(1)};
    }
  };
  int split = 0;  // first index with s >= 0
  while (split < grid_points && lo_ + (hi_ - lo_) * split / (grid_points - 1) < 0.0) ++split;
  if (split < grid_points) sweep(split, grid_points - 1, 1);
  if (split > 0) sweep(split - 1, 0, -1);
  return out;
}

ZeroDynamics::Extrema ZeroDynamics::potential_extrema(int grid_points) const {
  const auto samples = profile(grid_points);
  auto slope = [this](double s) {
    const auto [psi, pot] = psi_and_potential(s);
    return -psi * alpha(s).first;
  };
  std::vector<std::pair<double, double>> candidates;  // (q2, P)
  candidates.emplace_back(samples.front().q2, samples.front().potential);
  candidates.emplace_back(samples.back().q2, samples.back().potential);
  double prev_q = samples.front().q2;
  double prev_d = -samples.front().psi * samples.front().alpha1;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const Sample& smp = samples[i];
    const double d = -smp.psi * smp.alpha1;
    if (d == 0.0) {
      candidates.emplace_back(smp.q2, smp.potential);
    } else if (prev_d != 0.0 && (d > 0.0) != (prev_d > 0.0)) {
      double a = prev_q, b = smp.q2, fa = prev_d;
      for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = slope(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      const double root = 0.5 * (a + b);
      candidates.emplace_back(root, psi_and_potential(root).second);
    }
    prev_q = smp.q2;
    prev_d = d;
  }
  Extrema e;
  e.min = e.max = candidates.front().second;
  e.argmin = e.argmax = candidates.front().first;
  for (const auto& [q, p] : candidates) {
    if (p < e.min) {
      e.min = p;
      e.argmin = q;
    }
    if (p > e.max) {
      e.max = p;
      e.argmax = q;
    }
  }
  return e;
}

Orbit make_orbit(const ZeroDynamics& zd, double anchor_q2, double anchor_dq2) {
  if (anchor_q2 < zd.lo() || anchor_q2 > zd.hi()) {
    throw ValidationError("[orbit]: anchor q2 lies outside the operating interval");
  }
  Orbit o;
  o.anchor_q2 = anchor_q2;
  o.anchor_dq2 = anchor_dq2;
  o.energy_level = zd.energy(anchor_q2, anchor_dq2);
  o.potential = zd.potential_extrema();
  if (!(o.energy_level > o.potential.max)) {
    std::ostringstream os;
    os << "[orbit]: infeasible orbit, energy level " << o.energy_level
       << " does not exceed P_max = " << o.potential.max;
    throw ValidationError(os.str());
  }
  return o;
}

double orbit_velocity(const ZeroDynamics& zd, const Orbit& orbit, double q2) {
  const auto [psi, pot] = zd.psi_and_potential(q2);
  const double margin = orbit.energy_level - pot;
  if (!(margin > 0.0)) {
    std::ostringstream os;
    os << "orbit does not reach this q2 (" << q2 << ")";
    throw ValidationError(os.str());
  }
  const double speed = std::sqrt(2.0 * margin / psi);
  return orbit.anchor_dq2 < 0.0 ? -speed : speed;
}

State lift_to_manifold(const Gait& gait, double q2, double dq2) {
  const int n = gait.dof();
  State x{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  x.q << gait.phi(q2), q2;
  x.dq << gait.phi_prime(q2) * dq2, dq2;
  return x;
}

}  // namespace biped
