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

#include <gtest/gtest.h>

#include <random>

#include "biped/control.hpp"
#include "biped/errors.hpp"
#include "biped/hybrid.hpp"
#include "biped/ode.hpp"
#include "fixture.hpp"

namespace biped {
namespace {

using testing::kAnchorDq2;
using testing::kAnchorQ2;

class ZeroDynamicsTest : public ::testing::Test {
 protected:
  ZeroDynamics zd_ = testing::five_link_zero_dynamics();
};

TEST_F(ZeroDynamicsTest, MatchesFullModelOnManifold) {
  const ContinuousGains gains = ContinuousGains::uniform(4, 750.0, 25.0);
  for (double s : {-0.4, -0.2, 0.05, 0.3}) {
    const State x = lift_to_manifold(zd_.gait(), s, 1.0);
    const Eigen::VectorXd f = closed_loop_dynamics(zd_.biped(), zd_.gait(), gains, x);
    const auto [a1, a2] = zd_.alpha(s);
    EXPECT_NEAR(f(9), a1 + a2, 1e-8) << s;
  }
}

TEST_F(ZeroDynamicsTest, CoefficientsAreOdd) {
  const auto [a10, a20] = zd_.alpha(0.0);
  EXPECT_NEAR(a10, 0.0, 1e-12);
  EXPECT_NEAR(a20, 0.0, 1e-12);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.49, 0.49);
  for (int i = 0; i < 200; ++i) {
    const double s = u(rng);
    const auto [p1, p2] = zd_.alpha(s);
    const auto [m1, m2] = zd_.alpha(-s);
    EXPECT_NEAR(p1, -m1, 1e-10);
    EXPECT_NEAR(p2, -m2, 1e-10);
  }
}

TEST_F(ZeroDynamicsTest, EnergyNormalizedAtOrigin) {
  EXPECT_DOUBLE_EQ(zd_.energy(0.0, 2.0), 2.0);
  const auto [psi, pot] = zd_.psi_and_potential(0.0);
  EXPECT_EQ(psi, 1.0);
  EXPECT_EQ(pot, 0.0);
}

TEST_F(ZeroDynamicsTest, PotentialIsEven) {
  for (double s = 0.01; s < 0.49; s += 0.037) {
    EXPECT_NEAR(zd_.psi_and_potential(s).second, zd_.psi_and_potential(-s).second, 1e-8);
    EXPECT_NEAR(zd_.psi_and_potential(s).first, zd_.psi_and_potential(-s).first, 1e-8);
  }
  const auto prof = zd_.profile(101);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    EXPECT_NEAR(prof[i].potential, prof[prof.size() - 1 - i].potential, 1e-8);
    EXPECT_NEAR(prof[i].potential, zd_.psi_and_potential(prof[i].q2).second, 1e-9);
  }
}

TEST_F(ZeroDynamicsTest, EnergyConservedAlongZeroDynamics) {
  const double c = zd_.energy(kAnchorQ2, kAnchorDq2);
  auto rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
    const auto [a1, a2] = zd_.alpha(y(0));
    dy.resize(2);
    dy << y(1), a1 + a2 * y(1) * y(1);
  };
  Eigen::VectorXd y(2);
  y << kAnchorQ2, kAnchorDq2;
  OdeOptions o;
  o.rtol = o.atol = 1e-12;
  for (int k = 0; k < 11; ++k) {
    y = integrate(rhs, y, 0.05 * k, 0.05 * (k + 1), o);
    EXPECT_NEAR(zd_.energy(y(0), y(1)), c, 1e-8);
  }
  // The full model reaches the mirrored anchor after 0.56444 s.
  y = integrate(rhs, y, 0.55, 0.5644409666, o);
  EXPECT_NEAR(y(0), -kAnchorQ2, 1e-6);
}

TEST_F(ZeroDynamicsTest, ExtremaAndFeasibility) {
  const auto e = zd_.potential_extrema();
  EXPECT_TRUE(std::isfinite(e.max));
  EXPECT_NEAR(e.argmax, 0.0, 1e-6);
  const auto fine = zd_.potential_extrema(4001);
  EXPECT_NEAR(e.max, fine.max, 1e-8);
  EXPECT_NEAR(e.min, fine.min, 1e-8);
  const Orbit o = make_orbit(zd_, kAnchorQ2, kAnchorDq2);
  EXPECT_GT(o.energy_level, o.potential.max);
  EXPECT_THROW(make_orbit(zd_, kAnchorQ2, -0.01), ValidationError);
}

TEST_F(ZeroDynamicsTest, FlatPotentialWithoutGravity) {
  BipedParams p = BipedParams::five_link();
  p.g = 0.0;
  const ZeroDynamics zd(Biped(p), zd_.gait());
  const auto e = zd.potential_extrema(201);
  EXPECT_EQ(e.min, 0.0);
  EXPECT_EQ(e.max, 0.0);
}

TEST_F(ZeroDynamicsTest, OrbitVelocity) {
  const Orbit o = make_orbit(zd_, kAnchorQ2, kAnchorDq2);
  EXPECT_NEAR(orbit_velocity(zd_, o, kAnchorQ2), kAnchorDq2, 1e-10);
  EXPECT_NEAR(orbit_velocity(zd_, o, -kAnchorQ2), kAnchorDq2, 1e-8);
  for (double s = 0.0; s < 0.45; s += 0.05) {
    EXPECT_NEAR(orbit_velocity(zd_, o, s), orbit_velocity(zd_, o, -s), 1e-6);
    EXPECT_LT(orbit_velocity(zd_, o, s), 0.0);
  }
  Orbit low = o;
  low.energy_level = -0.1;
  EXPECT_THROW(orbit_velocity(zd_, low, 0.0), ValidationError);
}

// Cross-check the section velocity against the flow from the anchor.
TEST_F(ZeroDynamicsTest, SectionVelocityMatchesFlow) {
  const Orbit o = make_orbit(zd_, kAnchorQ2, kAnchorDq2);
  // Integrate in q2 as the independent variable: d(dq2^2/2)/dq2 = a1 + a2 dq2^2.
  auto rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double s) {
    const auto [a1, a2] = zd_.alpha(s);
    dy.resize(1);
    dy << 2.0 * (a1 + a2 * y(0));
  };
  Eigen::VectorXd v2(1);
  v2 << kAnchorDq2 * kAnchorDq2;
  OdeOptions opt;
  opt.rtol = opt.atol = 1e-12;
  v2 = integrate(rhs, v2, kAnchorQ2, kPi / 16.0, opt);
  EXPECT_NEAR(-std::sqrt(v2(0)), orbit_velocity(zd_, o, kPi / 16.0), 1e-8);
}

TEST_F(ZeroDynamicsTest, LiftToManifold) {
  const State x = lift_to_manifold(zd_.gait(), 0.0, 0.0);
  EXPECT_NEAR((x.q1() - Eigen::Vector4d(0.0, 0.0, kPi, 0.0)).norm(), 0.0, 1e-15);
  EXPECT_TRUE(x.dq.isZero(0.0));
  const State a = lift_to_manifold(zd_.gait(), kAnchorQ2, kAnchorDq2);
  EXPECT_LT((a.dq1() - zd_.gait().phi_prime(kAnchorQ2) * kAnchorDq2).norm(), 1e-15);
}

// The designed gait's swing ends where the next one starts.
TEST_F(ZeroDynamicsTest, SwingEndpointsAreEnergyConserving) {
  const Orbit o = make_orbit(zd_, kAnchorQ2, kAnchorDq2);
  const double v = orbit_velocity(zd_, o, -kAnchorQ2);
  const State end = lift_to_manifold(zd_.gait(), -kAnchorQ2, v);
  EXPECT_NEAR(zd_.biped().swing_foot(end).y(), 0.0, 1e-6);
  EXPECT_LT(zd_.biped().swing_foot_velocity(end).norm(), 1e-6);
  const State next = relabel(end);
  const State start = lift_to_manifold(zd_.gait(), kAnchorQ2, kAnchorDq2);
  EXPECT_LT((next.q - start.q).norm(), 1e-6);
  EXPECT_LT((next.dq - start.dq).norm(), 1e-6);
}

TEST_F(ZeroDynamicsTest, EmptyIntervalRejected) {
  EXPECT_THROW(ZeroDynamics(zd_.biped(), zd_.gait(), 0.2, 0.2), ValidationError);
}

}  // namespace
}  // namespace biped
