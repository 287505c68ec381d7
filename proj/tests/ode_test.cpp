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

#include "biped/ode.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace biped {
namespace {

void oscillator(const Eigen::VectorXd& x, Eigen::VectorXd& dx, double) {
  dx.resize(2);
  dx << x(1), -x(0);
}

TEST(OdeTest, HarmonicOscillatorForwardAndBackward) {
  const Eigen::VectorXd x0 = Eigen::Vector2d(1.0, 0.0);
  const Eigen::VectorXd x1 = integrate(oscillator, x0, 0.0, 2.0);
  EXPECT_NEAR(x1(0), std::cos(2.0), 1e-9);
  EXPECT_NEAR(x1(1), -std::sin(2.0), 1e-9);
  const Eigen::VectorXd back = integrate(oscillator, x1, 2.0, 0.0);
  EXPECT_LT((back - x0).norm(), 1e-9);
  EXPECT_EQ(integrate(oscillator, x0, 1.0, 1.0), x0);
}

TEST(OdeTest, DenseOutputAndRootLocation) {
  DenseStepper s(oscillator, Eigen::Vector2d(1.0, 0.0), 0.0, OdeOptions{});
  auto g = [](const Eigen::VectorXd& x) { return x(0); };
  double root = -1.0;
  for (int i = 0; i < 10000 && root < 0.0; ++i) {
    const double gp = g(s.x());
    s.step();
    EXPECT_GT(s.t(), s.t_prev());
    const double tm = 0.5 * (s.t() + s.t_prev());
    EXPECT_NEAR(s.interpolate(tm)(0), std::cos(tm), 1e-8);
    if (gp > 0.0 && g(s.x()) <= 0.0) root = locate_root(s, g, gp);
  }
  EXPECT_NEAR(root, M_PI / 2.0, 1e-9);
}

TEST(OdeTest, StepCapRespected) {
  OdeOptions o;
  o.max_step = 1e-3;
  DenseStepper s(oscillator, Eigen::Vector2d(1.0, 0.0), 0.0, o);
  for (int i = 0; i < 50; ++i) {
    s.step();
    EXPECT_LE(s.t() - s.t_prev(), 1e-3 * (1.0 + 1e-12));
  }
}

}  // namespace
}  // namespace biped
