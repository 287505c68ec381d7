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

#include "biped/hybrid.hpp"

#include "biped/angles.hpp"
#include "biped/errors.hpp"

namespace biped {

State impulse_jump(const Biped& biped, const State& pre, const Eigen::VectorXd& impulse) {
  const int n = biped.dof();
  if (impulse.size() != n - 1) {
    throw ValidationError("impulse_jump: impulse must have n-1 entries");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.head(n - 1) = impulse;
  Eigen::LLT<Eigen::MatrixXd> llt(biped.mass_matrix(pre.q));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("impulse_jump: mass matrix is not positive definite");
  }
  State post = pre;
  post.dq += llt.solve(rhs);
  return post;
}

ImpactResult impact_map(const Biped& biped, const State& pre) {
  const int n = biped.dof();
  const ExtendedState e = lift_extended(pre);
  const Eigen::MatrixXd Me = biped.extended_mass_matrix(e.qe);
  const Eigen::MatrixXd G = biped.swing_foot_jacobian(e.qe);

  const int m = n + 4;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
  K.topLeftCorner(n + 2, n + 2) = Me;
  K.topRightCorner(n + 2, 2) = -G.transpose();
  K.bottomLeftCorner(2, n + 2) = G;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs.head(n + 2) = Me * e.dqe;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible()) {
    throw NumericalError("impact_map: degenerate impact configuration");
  }
  const Eigen::VectorXd sol = lu.solve(rhs);

  ImpactResult r;
  r.dqe_post = sol.head(n + 2);
  r.ground_impulse = sol.tail(2);
  r.post = State{pre.q, sol.head(n)};
  return r;
}

RelabelMap relabel_map(int n) {
  RelabelMap r{Eigen::MatrixXi::Zero(n, n), Eigen::VectorXd::Zero(n)};
  // 1-based: V_ij = -1 for i + j = n, V_nj = 1.
  for (int i = 1; i < n; ++i) r.V(i - 1, n - i - 1) = -1;
  r.V.row(n - 1).setOnes();
  r.Pi((n - 1) / 2 - 1) = kPi;
  r.Pi((n + 1) / 2 - 1) = -kPi;
  r.Pi(n - 1) = -kPi;
  return r;
}

State relabel(const State& pre) {
  const int n = pre.dof();
  const RelabelMap r = relabel_map(n);
  const Eigen::MatrixXd V = r.V.cast<double>();
  State post{V * pre.q + r.Pi, V * pre.dq};
  post.q = wrap_angles(post.q);
  return post;
}

GuardInfo guard_values(const Biped& biped, const State& x, const GuardTolerances& tol) {
  GuardInfo g;
  g.gamma_y = biped.swing_foot(x).y();
  g.dgamma = biped.swing_foot_velocity(x);
  if (std::abs(g.gamma_y) >= tol.position) return g;
  if (g.dgamma.norm() < tol.velocity) {
    g.classification = GuardClass::kS2;
  } else if (g.dgamma.y() < -tol.velocity) {
    g.classification = GuardClass::kS1;
  } else {
    g.diagnostic = g.dgamma.y() > tol.velocity ? "grazing/exit contact: foot moving upward"
                                               : "grazing/exit contact: tangential foot velocity";
  }
  return g;
}

const char* to_string(GuardClass c) {
  switch (c) {
    case GuardClass::kS1:
      return "S1";
    case GuardClass::kS2:
      return "S2";
    default:
      return "none";
  }
}

}  // namespace biped
