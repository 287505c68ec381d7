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

#include "biped/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "biped/errors.hpp"
#include "biped/ode.hpp"
#include "biped/vhc.hpp"
#include "fixture.hpp"

namespace biped {
namespace {

using testing::random_vector;

class ModelTest : public ::testing::Test {
 protected:
  Biped biped_{BipedParams::five_link()};
  std::mt19937_64 rng_{42};
};

TEST_F(ModelTest, ZeroAbsoluteStateMapsToZero) {
  const State x = abs_to_gen({Eigen::VectorXd::Zero(5), Eigen::VectorXd::Zero(5)});
  EXPECT_TRUE(x.q.isZero(0.0));
  EXPECT_TRUE(x.dq.isZero(0.0));
}

TEST_F(ModelTest, AbsGenRoundTrip) {
  for (int i = 0; i < 100; ++i) {
    const AbsState a{random_vector(rng_, 5, -3.0, 3.0), random_vector(rng_, 5, -5.0, 5.0)};
    const AbsState b = gen_to_abs(abs_to_gen(a));
    EXPECT_LT((a.theta - b.theta).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((a.dtheta - b.dtheta).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST_F(ModelTest, TableGaitAnglesGiveConstraintMap) {
  const Gait gait(VhcParams::five_link_table());
  const double t1 = kPi / 8.0;
  const State x = abs_to_gen({gait.theta(t1), Eigen::VectorXd::Zero(5)});
  EXPECT_DOUBLE_EQ(x.q2(), t1);
  EXPECT_LT((x.q1() - gait.phi(t1)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST_F(ModelTest, ConversionRejectsMismatchedSizes) {
  EXPECT_THROW(abs_to_gen({Eigen::VectorXd::Zero(5), Eigen::VectorXd::Zero(4)}),
               ValidationError);
}

TEST_F(ModelTest, MassMatrixSymmetricPositiveDefiniteAndEven) {
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd q = random_vector(rng_, 5, -kPi, kPi);
    const Eigen::MatrixXd M = biped_.mass_matrix(q);
    EXPECT_LT((M - M.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues().minCoeff(), 0.0);
    EXPECT_LT((biped_.mass_matrix(-q) - M).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(biped_.potential_energy(-q), biped_.potential_energy(q), 1e-12);
  }
}

// Only the first link carries mass: a pendulum pivoting on the stance foot
// with its COM above the pivot at zero angle.
TEST_F(ModelTest, SingleLinkReducesToInvertedPendulum) {
  BipedParams p = BipedParams::five_link();
  for (int j = 1; j < 5; ++j) {
    p.mass(j) = 0.0;
    p.inertia(j) = 0.0;
  }
  const Biped pend(p);
  const double m = p.mass(0), d = p.com(0), J = p.inertia(0), g = p.g;
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd q = random_vector(rng_, 5, -kPi, kPi);
    const Eigen::VectorXd dq = random_vector(rng_, 5, -3.0, 3.0);
    const Eigen::MatrixXd M = pend.mass_matrix(q);
    EXPECT_NEAR(M(4, 4), m * d * d + J, 1e-14);
    EXPECT_LT(M.row(4).head(4).cwiseAbs().maxCoeff(), 1e-14);
    const double ddq2 = -pend.bias_forces(q, dq)(4) / M(4, 4);
    EXPECT_NEAR(ddq2, m * g * d / (m * d * d + J) * std::sin(q(4)), 1e-12);
  }
}

TEST_F(ModelTest, GravityIsPotentialGradient) {
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd q = random_vector(rng_, 5, -kPi, kPi);
    const Eigen::VectorXd h0 = biped_.bias_forces(q, Eigen::VectorXd::Zero(5));
    EXPECT_LT((h0 - biped_.gravity_forces(q)).cwiseAbs().maxCoeff(), 1e-13);
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd qp = q, qm = q;
      const double h = 1e-6;
      qp(k) += h;
      qm(k) -= h;
      const double fd = (biped_.potential_energy(qp) - biped_.potential_energy(qm)) / (2 * h);
      EXPECT_NEAR(h0(k), fd, 1e-7);
    }
  }
}

TEST_F(ModelTest, PotentialMatchesForwardKinematics) {
  const BipedParams& p = biped_.params();
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd q = random_vector(rng_, 5, -kPi, kPi);
    const Eigen::VectorXd th = gen_to_abs({q, Eigen::VectorXd::Zero(5)}).theta;
    // Stance leg from the foot to the hip, then torso and swing leg from the hip.
    double V = 0.0, y = 0.0;
    for (int j = 0; j < 2; ++j) {
      V += p.mass(j) * p.g * (y + p.com(j) * std::cos(th(j)));
      y += p.length(j) * std::cos(th(j));
    }
    const double hip = y;
    V += p.mass(2) * p.g * (hip + p.com(2) * std::cos(th(2)));
    y = hip;
    for (int j = 3; j < 5; ++j) {
      V += p.mass(j) * p.g * (y + p.com(j) * std::cos(th(j)));
      y += p.length(j) * std::cos(th(j));
    }
    EXPECT_NEAR(biped_.potential_energy(q), V, 1e-12);
  }
}

TEST_F(ModelTest, KineticEnergyZeroAtRest) {
  const Eigen::VectorXd q = random_vector(rng_, 5, -kPi, kPi);
  EXPECT_EQ(biped_.kinetic_energy(q, Eigen::VectorXd::Zero(5)), 0.0);
}

TEST_F(ModelTest, EquationOfMotionResidual) {
  for (int i = 0; i < 100; ++i) {
    const State x{random_vector(rng_, 5, -kPi, kPi), random_vector(rng_, 5, -4.0, 4.0)};
    const Eigen::VectorXd u = random_vector(rng_, 4, -10.0, 10.0);
    const Eigen::VectorXd ddq = biped_.accelerations(x, u);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
    rhs.head(4) = u;
    const Eigen::VectorXd res =
        biped_.mass_matrix(x.q) * ddq + biped_.bias_forces(x.q, x.dq) - rhs;
    EXPECT_LT(res.norm(), 1e-10);
    const Eigen::VectorXd f = biped_.swing_dynamics(x, u);
    EXPECT_EQ(f.head(5), x.dq);
    EXPECT_EQ(f.tail(5), ddq);
  }
}

TEST_F(ModelTest, UprightRestIsStationary) {
  // All links vertical with the legs pointing up: COMs on the pivot vertical.
  const State x{Eigen::VectorXd::Zero(5), Eigen::VectorXd::Zero(5)};
  EXPECT_LT(biped_.accelerations(x, Eigen::VectorXd::Zero(4)).norm(), 1e-14);
}

// d/dt (T + V) = dq1' u along solutions.
TEST_F(ModelTest, PowerBalanceUnderConstantTorque) {
  const Eigen::VectorXd u = random_vector(rng_, 4, -2.0, 2.0);
  State x0{random_vector(rng_, 5, -0.3, 0.3), random_vector(rng_, 5, -1.0, 1.0)};
  Eigen::VectorXd y0(11);
  y0 << x0.packed(), 0.0;
  auto rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
    const State s = State::unpack(y.head(10));
    dy.resize(11);
    dy << biped_.swing_dynamics(s, u), s.dq1().dot(u);
  };
  const Eigen::VectorXd y1 = integrate(rhs, y0, 0.0, 0.5);
  const State x1 = State::unpack(y1.head(10));
  EXPECT_NEAR(biped_.total_energy(x1) - biped_.total_energy(x0), y1(10), 1e-8);
}

TEST_F(ModelTest, PassiveEnergyDrift) {
  State x0{Eigen::VectorXd::Zero(5), Eigen::VectorXd::Zero(5)};
  x0.q << 0.1, -0.2, 3.0, 0.1, 0.2;
  x0.dq << 0.5, -0.3, 0.2, 0.1, -0.4;
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
  auto rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
    dy = biped_.swing_dynamics(State::unpack(y), u);
  };
  const State x1 = State::unpack(integrate(rhs, x0.packed(), 0.0, 1.0));
  const double e0 = biped_.total_energy(x0);
  EXPECT_LT(std::abs(biped_.total_energy(x1) - e0) / std::abs(e0), 1e-6);
}

TEST_F(ModelTest, ExtendedMassMatrixStructure) {
  const double total = biped_.params().mass.sum();
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd qe(7);
    qe << random_vector(rng_, 5, -kPi, kPi), random_vector(rng_, 2, -1.0, 1.0);
    const Eigen::MatrixXd Me = biped_.extended_mass_matrix(qe);
    EXPECT_LT((Me - Me.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Me).eigenvalues().minCoeff(), 0.0);
    EXPECT_NEAR(Me(5, 5), total, 1e-12);
    EXPECT_NEAR(Me(6, 6), total, 1e-12);
    EXPECT_NEAR(Me(5, 6), 0.0, 1e-12);
    EXPECT_LT((Me.topLeftCorner(5, 5) - biped_.mass_matrix(qe.head(5))).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

// Extended dynamics with the stance foot held by a constraint force reproduce
// the swing-phase accelerations.
TEST_F(ModelTest, PinnedFootReduction) {
  for (int i = 0; i < 50; ++i) {
    const State x{random_vector(rng_, 5, -kPi, kPi), random_vector(rng_, 5, -3.0, 3.0)};
    const Eigen::VectorXd u = random_vector(rng_, 4, -5.0, 5.0);
    const ExtendedState e = lift_extended(x, Eigen::Vector2d(0.3, -0.1));
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(9, 9);
    K.topLeftCorner(7, 7) = biped_.extended_mass_matrix(e.qe);
    K(5, 7) = K(7, 5) = -1.0;
    K(6, 8) = K(8, 6) = -1.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(9);
    rhs.head(4) = u;
    rhs.head(7) -= biped_.extended_bias_forces(e.qe, e.dqe);
    const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
    EXPECT_LT((sol.head(5) - biped_.accelerations(x, u)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(sol.segment(5, 2).norm(), 1e-12);
  }
}

TEST_F(ModelTest, FootJacobianMatchesFiniteDifferences) {
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd qe(7);
    qe << random_vector(rng_, 5, -kPi, kPi), random_vector(rng_, 2, -1.0, 1.0);
    const Eigen::MatrixXd G = biped_.swing_foot_jacobian(qe);
    EXPECT_TRUE(G.rightCols(2).isIdentity(0.0));
    for (int k = 0; k < 7; ++k) {
      Eigen::VectorXd p = qe, m = qe;
      p(k) += 1e-6;
      m(k) -= 1e-6;
      const Eigen::Vector2d fd = (biped_.swing_foot(p) - biped_.swing_foot(m)) / 2e-6;
      EXPECT_LT((G.col(k) - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
    const Eigen::VectorXd dqe = random_vector(rng_, 7, -2.0, 2.0);
    EXPECT_LT((biped_.swing_foot_velocity(qe, dqe) - G * dqe).norm(), 1e-12);
  }
}

TEST_F(ModelTest, FootVelocityMatchesAngleForm) {
  const BipedParams& p = biped_.params();
  for (int i = 0; i < 50; ++i) {
    const State x{random_vector(rng_, 5, -kPi, kPi), random_vector(rng_, 5, -3.0, 3.0)};
    const AbsState a = gen_to_abs(x);
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int j = 0; j < 5; ++j) {
      if (j == 2) continue;
      v -= p.length(j) * Eigen::Vector2d(std::cos(a.theta(j)), std::sin(a.theta(j))) *
           a.dtheta(j);
    }
    EXPECT_LT((biped_.swing_foot_velocity(x) - v).norm(), 1e-12);
  }
}

TEST_F(ModelTest, DesignedGaitEndpointHasBothFeetDown) {
  const Gait gait(testing::refined_gait());
  const State x{(Eigen::VectorXd(5) << gait.phi(kPi / 8), kPi / 8).finished(),
                Eigen::VectorXd::Zero(5)};
  EXPECT_NEAR(biped_.swing_foot(x).y(), 0.0, 1e-10);
}

TEST_F(ModelTest, ValidationNamesKey) {
  BipedParams p = BipedParams::five_link();
  p.mass(1) = -1.0;
  try {
    p.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("[biped].m"), std::string::npos);
  }
  p = BipedParams::five_link();
  p.n = 4;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST_F(ModelTest, LegSymmetry) {
  BipedParams p = BipedParams::five_link();
  EXPECT_FALSE(p.leg_symmetry_violation().has_value());
  p.mass(3) += 0.1;
  ASSERT_TRUE(p.leg_symmetry_violation().has_value());
  EXPECT_EQ(*p.leg_symmetry_violation(), 2);
}

}  // namespace
}  // namespace biped
