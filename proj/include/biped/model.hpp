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

#ifndef BIPED_MODEL_HPP
#define BIPED_MODEL_HPP

#include <Eigen/Dense>
#include <optional>

namespace biped {

/// Physical constants of the planar n-link chain.
///
/// Links are numbered from the stance foot: stance leg links
/// 0 .. L-1 (L = (n-1)/2), torso L, swing leg links L+1 .. n-1. Every link
/// points from its proximal joint to its distal end along
/// (-sin theta, cos theta); `com` is measured from the proximal joint.
struct BipedParams {
  int n = 5;
  Eigen::VectorXd length;
  Eigen::VectorXd com;
  Eigen::VectorXd mass;
  Eigen::VectorXd inertia;
  double g = 9.81;

  /// The five-link biped of the reference case study.
  static BipedParams five_link();

  int leg_links() const { return (n - 1) / 2; }
  int torso() const { return (n - 1) / 2; }

  /// Checks sizes, oddness of n and sign constraints. Throws ValidationError
  /// whose message names the offending key, e.g. "[biped].m".
  void validate() const;

  /// Index j (1-based, stance side) of the first link pair whose mirrored
  /// constants disagree by more than `tol`, if any.
  std::optional<int> leg_symmetry_violation(double tol = 1e-12) const;
};

/// Generalized state x = (q, dq) with q = (q1, q2): q1 holds the n-1
/// relative joint angles theta_{j+1} - theta_j, q2 = theta_1.
struct State {
  Eigen::VectorXd q;
  Eigen::VectorXd dq;

  int dof() const { return static_cast<int>(q.size()); }
  auto q1() const { return q.head(q.size() - 1); }
  auto dq1() const { return dq.head(dq.size() - 1); }
  double q2() const { return q(q.size() - 1); }
  double dq2() const { return dq(dq.size() - 1); }

  /// Stacked (q, dq), the integrator's representation.
  Eigen::VectorXd packed() const;
  static State unpack(const Eigen::VectorXd& x);
};

/// Absolute link angles, counter-clockwise from the vertical.
struct AbsState {
  Eigen::VectorXd theta;
  Eigen::VectorXd dtheta;
};

/// Generalized coordinates plus the stance foot position (s_x, s_y).
struct ExtendedState {
  Eigen::VectorXd qe;
  Eigen::VectorXd dqe;
};

State abs_to_gen(const AbsState& a);
AbsState gen_to_abs(const State& x);

/// Lifts x to extended coordinates with the stance foot at `foot` and at rest.
ExtendedState lift_extended(const State& x,
                            const Eigen::Vector2d& foot = Eigen::Vector2d::Zero());

/// Swing-phase and extended-coordinate rigid-body dynamics.
///
/// Composed from the absolute-angle Lagrangian of the chain and mapped to q
/// through the constant matrix S with theta = S q. All members are const.
class Biped {
 public:
  explicit Biped(BipedParams params);

  const BipedParams& params() const { return params_; }
  int dof() const { return params_.n; }
  double total_mass() const { return total_mass_; }

  /// theta = S q.
  const Eigen::MatrixXd& coordinate_map() const { return S_; }

  Eigen::MatrixXd mass_matrix(const Eigen::VectorXd& q) const;
  Eigen::VectorXd bias_forces(const Eigen::VectorXd& q,
                              const Eigen::VectorXd& dq) const;
  Eigen::VectorXd gravity_forces(const Eigen::VectorXd& q) const;

  double potential_energy(const Eigen::VectorXd& q) const;
  double kinetic_energy(const Eigen::VectorXd& q, const Eigen::VectorXd& dq) const;
  double total_energy(const State& x) const;

  /// Solves M ddq + h = (u, 0) for ddq.
  Eigen::VectorXd accelerations(const State& x, const Eigen::VectorXd& u) const;
  /// Stacked (dq, ddq).
  Eigen::VectorXd swing_dynamics(const State& x, const Eigen::VectorXd& u) const;

  Eigen::MatrixXd extended_mass_matrix(const Eigen::VectorXd& qe) const;
  Eigen::VectorXd extended_bias_forces(const Eigen::VectorXd& qe,
                                       const Eigen::VectorXd& dqe) const;

  Eigen::Vector2d swing_foot(const Eigen::VectorXd& qe) const;
  Eigen::Vector2d swing_foot_velocity(const Eigen::VectorXd& qe,
                                      const Eigen::VectorXd& dqe) const;
  /// d(gamma)/d(qe), 2 x (n+2).
  Eigen::MatrixXd swing_foot_jacobian(const Eigen::VectorXd& qe) const;

  /// Foot position/velocity with the stance foot pinned at the origin.
  Eigen::Vector2d swing_foot(const State& x) const;
  Eigen::Vector2d swing_foot_velocity(const State& x) const;

 private:
  void check_dim(const Eigen::VectorXd& v, int expected, const char* what) const;
  Eigen::MatrixXd theta_mass_matrix(const Eigen::VectorXd& theta) const;

  BipedParams params_;
  Eigen::MatrixXd S_;
  // W(i,k) = sum_j m_j c_ji c_jk and w(i) = sum_j m_j c_ji, where c_ji is the
  // lever of link i in the COM position of link j.
  Eigen::MatrixXd W_;
  Eigen::VectorXd w_;
  // Lengths of the links on the stance-foot to swing-foot path, 0 for torso.
  Eigen::VectorXd foot_lever_;
  double total_mass_ = 0.0;
};

}  // namespace biped

#endif  // BIPED_MODEL_HPP
