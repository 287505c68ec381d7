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

#include <cmath>
#include <string>

#include "biped/errors.hpp"

namespace biped {

namespace {

Eigen::Vector2d link_dir(double th) { return {-std::sin(th), std::cos(th)}; }
Eigen::Vector2d link_dir_rate(double th) { return {-std::cos(th), -std::sin(th)}; }

}  // namespace

BipedParams BipedParams::five_link() {
  BipedParams p;
  p.n = 5;
  p.length.resize(5);
  p.com.resize(5);
  p.mass.resize(5);
  p.inertia.resize(5);
  p.length << 0.5, 0.55, 0.6, 0.55, 0.5;
  p.com << 0.25, 0.275, 0.3, 0.275, 0.25;
  p.mass << 0.4, 0.45, 0.55, 0.45, 0.4;
  p.inertia << 0.0083, 0.0113, 0.0165, 0.0113, 0.0083;
  p.g = 9.81;
  return p;
}

void BipedParams::validate() const {
  if (n < 3 || n % 2 == 0) {
    throw ValidationError("[biped].n: link count must be odd and >= 3, got " +
                          std::to_string(n));
  }
  auto check = [this](const Eigen::VectorXd& v, const char* key, bool strict) {
    if (v.size() != n) {
      throw ValidationError(std::string("[biped].") + key + ": expected " +
                            std::to_string(n) + " entries, got " +
                            std::to_string(v.size()));
    }
    for (int i = 0; i < n; ++i) {
      bool ok = std::isfinite(v(i)) && (strict ? v(i) > 0.0 : v(i) >= 0.0);
      if (!ok) {
        throw ValidationError(std::string("[biped].") + key + ": entry " +
                              std::to_string(i + 1) + " must be " +
                              (strict ? "positive" : "non-negative"));
      }
    }
  };
  check(length, "ell", true);
  check(com, "d", false);
  check(mass, "m", true);
  check(inertia, "J", false);
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw ValidationError("[biped].g: must be positive");
  }
}

std::optional<int> BipedParams::leg_symmetry_violation(double tol) const {
  for (int j = 0; j < leg_links(); ++j) {
    const int mirror = n - 1 - j;
    // Stance links measure COM from the foot side, swing links from the hip.
    const bool same = std::abs(length(mirror) - length(j)) <= tol &&
                      std::abs(mass(mirror) - mass(j)) <= tol &&
                      std::abs(inertia(mirror) - inertia(j)) <= tol &&
                      std::abs(com(mirror) - (length(j) - com(j))) <= tol;
    if (!same) return j + 1;
  }
  return std::nullopt;
}

Eigen::VectorXd State::packed() const {
  Eigen::VectorXd x(q.size() + dq.size());
  x << q, dq;
  return x;
}

State State::unpack(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size() / 2;
  return {x.head(n), x.tail(n)};
}

State abs_to_gen(const AbsState& a) {
  const Eigen::Index n = a.theta.size();
  if (n < 2 || a.dtheta.size() != n) {
    throw ValidationError("abs_to_gen: theta and dtheta must share size >= 2");
  }
  State x{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    x.q(j) = a.theta(j + 1) - a.theta(j);
    x.dq(j) = a.dtheta(j + 1) - a.dtheta(j);
  }
  x.q(n - 1) = a.theta(0);
  x.dq(n - 1) = a.dtheta(0);
  return x;
}

AbsState gen_to_abs(const State& x) {
  const Eigen::Index n = x.q.size();
  if (n < 2 || x.dq.size() != n) {
    throw ValidationError("gen_to_abs: q and dq must share size >= 2");
  }
  AbsState a{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  a.theta(0) = x.q(n - 1);
  a.dtheta(0) = x.dq(n - 1);
  for (Eigen::Index j = 1; j < n; ++j) {
    a.theta(j) = a.theta(j - 1) + x.q(j - 1);
    a.dtheta(j) = a.dtheta(j - 1) + x.dq(j - 1);
  }
  return a;
}

ExtendedState lift_extended(const State& x, const Eigen::Vector2d& foot) {
  const Eigen::Index n = x.q.size();
  ExtendedState e{Eigen::VectorXd(n + 2), Eigen::VectorXd::Zero(n + 2)};
  e.qe << x.q, foot;
  e.dqe.head(n) = x.dq;
  return e;
}

Biped::Biped(BipedParams params) : params_(std::move(params)) {
  const int n = params_.n;
  if (n < 3 || n % 2 == 0 || params_.length.size() != n || params_.com.size() != n ||
      params_.mass.size() != n || params_.inertia.size() != n) {
    throw ValidationError("Biped: inconsistent parameter dimensions");
  }
  const int L = params_.leg_links();

  S_ = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    S_(j, n - 1) = 1.0;
    for (int i = 0; i < j; ++i) S_(j, i) = 1.0;
  }

  // c(j, i): coefficient of link i's direction vector in the COM of link j.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (j <= L) {
      for (int i = 0; i < j; ++i) c(j, i) = params_.length(i);
    } else {
      for (int i = 0; i < L; ++i) c(j, i) = params_.length(i);
      for (int i = L + 1; i < j; ++i) c(j, i) = params_.length(i);
    }
    c(j, j) = params_.com(j);
  }
  W_ = c.transpose() * params_.mass.asDiagonal() * c;
  w_ = c.transpose() * params_.mass;
  total_mass_ = params_.mass.sum();

  foot_lever_ = params_.length;
  foot_lever_(L) = 0.0;
}

void Biped::check_dim(const Eigen::VectorXd& v, int expected, const char* what) const {
  if (v.size() != expected) {
    throw ValidationError(std::string("dimension mismatch for ") + what + ": expected " +
                          std::to_string(expected) + ", got " + std::to_string(v.size()));
  }
}

Eigen::MatrixXd Biped::theta_mass_matrix(const Eigen::VectorXd& th) const {
  const int n = dof();
  Eigen::MatrixXd Mt(n, n);
  for (int i = 0; i < n; ++i) {
    Mt(i, i) = W_(i, i) + params_.inertia(i);
    for (int k = i + 1; k < n; ++k) {
      Mt(i, k) = Mt(k, i) = W_(i, k) * std::cos(th(i) - th(k));
    }
  }
  return Mt;
}

Eigen::MatrixXd Biped::mass_matrix(const Eigen::VectorXd& q) const {
  check_dim(q, dof(), "q");
  const Eigen::VectorXd th = S_ * q;
  Eigen::MatrixXd M = S_.transpose() * theta_mass_matrix(th) * S_;
  return 0.5 * (M + M.transpose());
}

Eigen::VectorXd Biped::bias_forces(const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& dq) const {
  check_dim(q, dof(), "q");
  check_dim(dq, dof(), "dq");
  const int n = dof();
  const Eigen::VectorXd th = S_ * q;
  const Eigen::VectorXd dth = S_ * dq;
  Eigen::VectorXd ht(n);
  for (int i = 0; i < n; ++i) {
    double s = -params_.g * w_(i) * std::sin(th(i));
    for (int k = 0; k < n; ++k) {
      if (k != i) s += W_(i, k) * std::sin(th(i) - th(k)) * dth(k) * dth(k);
    }
    ht(i) = s;
  }
  return S_.transpose() * ht;
}

Eigen::VectorXd Biped::gravity_forces(const Eigen::VectorXd& q) const {
  return bias_forces(q, Eigen::VectorXd::Zero(dof()));
}

double Biped::potential_energy(const Eigen::VectorXd& q) const {
  check_dim(q, dof(), "q");
  const Eigen::VectorXd th = S_ * q;
  double v = 0.0;
  for (int i = 0; i < dof(); ++i) v += w_(i) * std::cos(th(i));
  return params_.g * v;
}

double Biped::kinetic_energy(const Eigen::VectorXd& q, const Eigen::VectorXd& dq) const {
  check_dim(dq, dof(), "dq");
  return 0.5 * dq.dot(mass_matrix(q) * dq);
}

double Biped::total_energy(const State& x) const {
  return kinetic_energy(x.q, x.dq) + potential_energy(x.q);
}

Eigen::VectorXd Biped::accelerations(const State& x, const Eigen::VectorXd& u) const {
  const int n = dof();
  check_dim(u, n - 1, "u");
  Eigen::VectorXd rhs = -bias_forces(x.q, x.dq);
  rhs.head(n - 1) += u;
  Eigen::LLT<Eigen::MatrixXd> llt(mass_matrix(x.q));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("swing_dynamics: mass matrix is not positive definite");
  }
  return llt.solve(rhs);
}

Eigen::VectorXd Biped::swing_dynamics(const State& x, const Eigen::VectorXd& u) const {
  Eigen::VectorXd xd(2 * dof());
  xd << x.dq, accelerations(x, u);
  return xd;
}

Eigen::MatrixXd Biped::extended_mass_matrix(const Eigen::VectorXd& qe) const {
  const int n = dof();
  check_dim(qe, n + 2, "qe");
  const Eigen::VectorXd q = qe.head(n);
  const Eigen::VectorXd th = S_ * q;
  // Coupling between the foot translation and each absolute angle.
  Eigen::MatrixXd Cs(n, 2);
  for (int i = 0; i < n; ++i) Cs.row(i) = w_(i) * link_dir_rate(th(i)).transpose();

  Eigen::MatrixXd Me(n + 2, n + 2);
  Me.topLeftCorner(n, n) = mass_matrix(q);
  Me.topRightCorner(n, 2) = S_.transpose() * Cs;
  Me.bottomLeftCorner(2, n) = Me.topRightCorner(n, 2).transpose();
  Me.bottomRightCorner(2, 2) = total_mass_ * Eigen::Matrix2d::Identity();
  return Me;
}

Eigen::VectorXd Biped::extended_bias_forces(const Eigen::VectorXd& qe,
                                            const Eigen::VectorXd& dqe) const {
  const int n = dof();
  check_dim(qe, n + 2, "qe");
  check_dim(dqe, n + 2, "dqe");
  const Eigen::VectorXd th = S_ * qe.head(n);
  const Eigen::VectorXd dth = S_ * dqe.head(n);
  Eigen::VectorXd he(n + 2);
  // Angle rows do not depend on the foot velocity.
  he.head(n) = bias_forces(qe.head(n), dqe.head(n));
  Eigen::Vector2d hs(0.0, params_.g * total_mass_);
  for (int i = 0; i < n; ++i) {
    hs += w_(i) * Eigen::Vector2d(std::sin(th(i)), -std::cos(th(i))) * dth(i) * dth(i);
  }
  he.tail(2) = hs;
  return he;
}

Eigen::Vector2d Biped::swing_foot(const Eigen::VectorXd& qe) const {
  const int n = dof();
  check_dim(qe, n + 2, "qe");
  const Eigen::VectorXd th = S_ * qe.head(n);
  Eigen::Vector2d p = qe.tail(2);
  for (int i = 0; i < n; ++i) p += foot_lever_(i) * link_dir(th(i));
  return p;
}

Eigen::MatrixXd Biped::swing_foot_jacobian(const Eigen::VectorXd& qe) const {
  const int n = dof();
  check_dim(qe, n + 2, "qe");
  const Eigen::VectorXd th = S_ * qe.head(n);
  Eigen::MatrixXd Jt(2, n);
  for (int i = 0; i < n; ++i) Jt.col(i) = foot_lever_(i) * link_dir_rate(th(i));
  Eigen::MatrixXd G(2, n + 2);
  G.leftCols(n) = Jt * S_;
  G.rightCols(2) = Eigen::Matrix2d::Identity();
  return G;
}

Eigen::Vector2d Biped::swing_foot_velocity(const Eigen::VectorXd& qe,
                                           const Eigen::VectorXd& dqe) const {
  check_dim(dqe, dof() + 2, "dqe");
  return swing_foot_jacobian(qe) * dqe;
}

Eigen::Vector2d Biped::swing_foot(const State& x) const {
  return swing_foot(lift_extended(x).qe);
}

Eigen::Vector2d Biped::swing_foot_velocity(const State& x) const {
  const ExtendedState e = lift_extended(x);
  return swing_foot_velocity(e.qe, e.dqe);
}

}  // namespace biped
