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

#include "biped/angles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace biped {
namespace {

TEST(AnglesTest, WrapRange) {
  for (double a = -20.0; a <= 20.0; a += 0.137) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(w - a, 2.0 * kPi), 0.0, 1e-12);
  }
}

TEST(AnglesTest, WrapBoundary) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-12);
}

TEST(AnglesTest, DiffIsShortestArc) {
  EXPECT_NEAR(angle_diff(kPi - 0.1, -kPi + 0.1), -0.2, 1e-12);
  EXPECT_NEAR(angle_diff(0.3, 0.1), 0.2, 1e-15);
}

TEST(AnglesTest, WrapVector) {
  Eigen::VectorXd v(3);
  v << 7.0, -7.0, 0.5;
  const Eigen::VectorXd w = wrap_angles(v);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(w(i), wrap_angle(v(i)), 0.0);
}

}  // namespace
}  // namespace biped
