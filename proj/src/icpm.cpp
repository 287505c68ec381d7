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

#include "biped/icpm.hpp"

#include <cmath>
#include <future>
#include <sstream>
#include <vector>

#include "biped/errors.hpp"
#include "biped/hybrid.hpp"

namespace biped {

Eigen::VectorXd to_section_state(const State& x) {
  const int n = x.dof();
  Eigen::VectorXd z(2 * n - 1);
  z << x.q1(), x.dq;
  return z;
}

State from_section_state(const Section& section, const Eigen::VectorXd& z) {
  const int n = static_cast<int>(z.size() + 1) / 2;
  if (z.size() != 2 * n - 1) throw ValidationError("section state must have 2n-1 entries");
  State x{Eigen::VectorXd(n), z.tail(n)};
  x.q << z.head(n - 1), section.q2_star;
  return x;
}

Eigen::VectorXd section_error(const Eigen::VectorXd& z, const Eigen::VectorXd& z_star) {
  Eigen::VectorXd e = z - z_star;
  const int n = static_cast<int>(z.size() + 1) / 2;
  e.head(n - 1) = wrap_angles(e.head(n - 1));
  return e;
}

Eigen::VectorXd poincare_map(const StepSystem& sys, const Eigen::VectorXd& z,
                             const Eigen::VectorXd& impulse, StepTrace* trace) {
  const Biped& biped = sys.walker.biped;
  const State x0 = from_section_state(sys.section, z);
  const State kicked = impulse_jump(biped, x0, impulse);

  const SwingResult down = integrate_swing(
      sys.walker, kicked, {SwingGoal::kTouchdown, sys.section.q2_star, sys.arm_q2()});
  ImpactResult impact;
  try {
    impact = impact_map(biped, down.exit);
  } catch (const NumericalError& e) {
    throw StepFailure(e.what());
  }
  const State swapped = relabel(impact.post);
  const SwingResult up = integrate_swing(
      sys.walker, swapped, {SwingGoal::kSection, sys.section.q2_star, sys.arm_q2()});

  if (trace != nullptr) {
    trace->after_impulse = kicked;
    trace->touchdown = down.exit;
    trace->after_impact = impact.post;
    trace->after_relabel = swapped;
    trace->next_on_section = up.exit;
    trace->ground_impulse = impact.ground_impulse;
    trace->touchdown_event = down.event;
    trace->swing_to_touchdown = down.duration;
    trace->swing_to_section = up.duration;
  }
  return to_section_state(up.exit);
}

Eigen::VectorXd find_fixed_point(const StepSystem& sys, const ZeroDynamics& zd,
                                 const Orbit& orbit, double tolerance) {
  const double q2 = sys.section.q2_star;
  const double dq2 = orbit_velocity(zd, orbit, q2);
  const Eigen::VectorXd z_star = to_section_state(lift_to_manifold(sys.walker.gait, q2, dq2));
  const int n = sys.dof();
  Eigen::VectorXd residual;
  try {
    residual = section_error(poincare_map(sys, z_star, Eigen::VectorXd::Zero(n - 1)), z_star);
  } catch (const StepFailure& e) {
    throw NumericalError(std::string("orbit/section inconsistent: ") + e.what());
  }
  if (!(residual.norm() < tolerance)) {
    std::ostringstream os;
    os << "orbit/section inconsistent: fixed-point residual " << residual.norm();
    throw NumericalError(os.str());
  }
  return z_star;
}

namespace {

Linearization linearize_once(const StepSystem& sys, const Eigen::VectorXd& z_star,
                             double dz, double di, bool parallel) {
  const int nz = static_cast<int>(z_star.size());
  const int ni = sys.dof() - 1;
  const Eigen::VectorXd zero_i = Eigen::VectorXd::Zero(ni);

  // Column c < nz perturbs z, otherwise the impulse.
  auto column = [&](int c) -> Eigen::VectorXd {
    Eigen::VectorXd zp = z_star, zm = z_star, ip = zero_i, im = zero_i;
    double h;
    if (c < nz) {
      h = dz;
      zp(c) += h;
      zm(c) -= h;
    } else {
      h = di;
      ip(c - nz) += h;
      im(c - nz) -= h;
    }
    const Eigen::VectorXd fp = poincare_map(sys, zp, ip);
    const Eigen::VectorXd fm = poincare_map(sys, zm, im);
    return section_error(fp, fm) / (2.0 * h);
  };

  std::vector<Eigen::VectorXd> cols(nz + ni);
  if (parallel) {
    std::vector<std::future<Eigen::VectorXd>> jobs;
    for (int c = 0; c < nz + ni; ++c) jobs.push_back(std::async(std::launch::async, column, c));
    for (int c = 0; c < nz + ni; ++c) cols[c] = jobs[c].get();
  } else {
    for (int c = 0; c < nz + ni; ++c) cols[c] = column(c);
  }
  Linearization lin{Eigen::MatrixXd(nz, nz), Eigen::MatrixXd(nz, ni)};
  for (int c = 0; c < nz; ++c) lin.A.col(c) = cols[c];
  for (int c = 0; c < ni; ++c) lin.B.col(c) = cols[nz + c];
  return lin;
}

}  // namespace

Linearization linearize(const StepSystem& sys, const Eigen::VectorXd& z_star,
                        const LinearizeOptions& options) {
  try {
    return linearize_once(sys, z_star, options.state_step, options.impulse_step,
                          options.parallel);
  } catch (const StepFailure&) {
    return linearize_once(sys, z_star, 0.1 * options.state_step, 0.1 * options.impulse_step,
                          options.parallel);
  }
}

int controllability_rank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd C(n, n * B.cols());
  Eigen::MatrixXd block = B;
  for (Eigen::Index i = 0; i < n; ++i) {
    C.middleCols(i * B.cols(), B.cols()) = block;
    block = A * block;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++rank;
  }
  return rank;
}

double spectral_radius(const Eigen::MatrixXd& A) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         const LqrOptions& options) {
  const Eigen::Index n = A.rows(), m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != m ||
      R.cols() != m) {
    throw ValidationError("lqr_gain: inconsistent dimensions");
  }
  Eigen::MatrixXd P = Q;
  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd BtP = B.transpose() * P;
    const Eigen::MatrixXd S = R + BtP * B;
    const Eigen::MatrixXd next =
        Q + A.transpose() * P * A - (BtP * A).transpose() * S.ldlt().solve(BtP * A);
    const Eigen::MatrixXd P_next = 0.5 * (next + next.transpose());
    if (!P_next.allFinite() || P_next.cwiseAbs().maxCoeff() > 1e15) break;
    const double change = (P_next - P).cwiseAbs().rowwise().sum().maxCoeff();
    P = P_next;
    if (change < options.tolerance * std::max(1.0, P.cwiseAbs().maxCoeff())) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("unstabilizable pair: Riccati iteration diverged");
  const Eigen::MatrixXd BtP = B.transpose() * P;
  const Eigen::MatrixXd K = -(R + BtP * B).ldlt().solve(BtP * A);
  if (!(spectral_radius(A + B * K) < 1.0)) {
    throw NumericalError("unstabilizable pair: closed loop not Schur stable");
  }
  return K;
}

Eigen::MatrixXd section_weight_q(int n, double angle_weight, double velocity_weight) {
  Eigen::VectorXd d(2 * n - 1);
  d.head(n - 1).setConstant(angle_weight);
  d.tail(n).setConstant(velocity_weight);
  return d.asDiagonal();
}

Eigen::VectorXd impulse_feedback(const IcpmController& ctl, const Eigen::VectorXd& z) {
  return ctl.K * section_error(z, ctl.z_star);
}

}  // namespace biped
