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

#ifndef BIPED_VHC_HPP
#define BIPED_VHC_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "biped/model.hpp"

namespace biped {

/// Sinusoidal virtual holonomic constraints
///   theta_j = a_j theta_1 + k_j pi + G_j sin(H_j theta_1),  j = 2..n,
/// stored at index j-2, plus the stance angle at the start of the swing.
struct VhcParams {
  Eigen::VectorXd a;
  Eigen::VectorXi k;
  Eigen::VectorXd G;
  Eigen::VectorXd H;
  double theta1_init = 0.0;

  int actuated() const { return static_cast<int>(a.size()); }
  void validate(int n) const;

  /// The published five-link gait (theta1_init = pi/8).
  static VhcParams five_link_table();
};

/// One component of Phi: slope*q2 + offset_pi*pi + sum amp*sin(freq*q2).
struct PhiComponent {
  double slope = 0.0;
  int offset_pi = 0;
  std::vector<std::pair<double, double>> terms;  // (amplitude, frequency)
};

/// The constraint map q1 = Phi(q2) induced by a set of VHC parameters.
class Gait {
 public:
  explicit Gait(VhcParams params);

  const VhcParams& params() const { return params_; }
  int dof() const { return params_.actuated() + 1; }
  double theta1_init() const { return params_.theta1_init; }

  /// All n absolute angles (theta_1 included) and derivatives w.r.t. theta_1.
  Eigen::VectorXd theta(double theta1) const;
  Eigen::VectorXd theta_prime(double theta1) const;
  Eigen::VectorXd theta_double_prime(double theta1) const;

  Eigen::VectorXd phi(double q2) const;
  Eigen::VectorXd phi_prime(double q2) const;
  Eigen::VectorXd phi_double_prime(double q2) const;

  /// Phi(0): the k_j pi offsets that survive at the symmetry point.
  Eigen::VectorXd offsets() const;
  std::vector<PhiComponent> coefficients() const;

 private:
  VhcParams params_;
};

/// Energy-conserving gait conditions at theta_1 = theta1_init, ordered as
/// [leg mirroring (L), torso upright (1), velocity mirroring (L),
///  impact-free foot velocity (1)], L = (n-1)/2. Angle residuals wrapped.
Eigen::VectorXd constraint_residuals(const BipedParams& biped, const VhcParams& vhc);

/// Names such as "a5" or "G2" select free parameters (link index 2..n).
struct FreeParameter {
  char kind = 'G';  // 'a' or 'G'
  int link = 2;

  static FreeParameter parse(const std::string& name);
  std::string name() const;
};

struct SolveOptions {
  double tolerance = 1e-12;
  int max_iterations = 100;
};

struct SolveResult {
  VhcParams params;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<std::string> warnings;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) on the constraint residuals,
/// varying only `free`, from the guess in `initial`. Throws NumericalError
/// ("no feasible parameters from this guess") when the residual cannot be
/// driven below the tolerance.
SolveResult solve_parameters(const BipedParams& biped, const VhcParams& initial,
                             const std::vector<FreeParameter>& free,
                             const SolveOptions& options = {});

/// rho = wrap(q1 - Phi(q2)), drho = dq1 - Phi'(q2) dq2.
std::pair<Eigen::VectorXd, Eigen::VectorXd> manifold_residual(const Gait& gait,
                                                              const State& x);

/// M12^T Phi' + M22 along the constraint at q2.
double regularity_denominator(const Biped& biped, const Gait& gait, double q2);

struct RegularityOptions {
  int grid_points = 2001;
};

/// Minimum of |M12^T Phi' + M22| over [lo, hi]. Throws NumericalError
/// ("VHC not regular on operating range") on a sign change.
double regularity_check(const Biped& biped, const Gait& gait, double lo, double hi,
                        const RegularityOptions& options = {});

}  // namespace biped

#endif  // BIPED_VHC_HPP
