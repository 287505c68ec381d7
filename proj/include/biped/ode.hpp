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

#ifndef BIPED_ODE_HPP
#define BIPED_ODE_HPP

#include <Eigen/Dense>
#include <functional>
#include <memory>

namespace biped {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 1e-2;
  double initial_step = 1e-4;
};

/// Adaptive Dormand-Prince 5(4) stepping with dense output, one accepted
/// step at a time. Callers inspect [t_prev, t] after each step and locate
/// events on the interpolant.
class DenseStepper {
 public:
  using Rhs = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& dxdt, double t)>;

  DenseStepper(Rhs rhs, const Eigen::VectorXd& x0, double t0, const OdeOptions& options);
  ~DenseStepper();
  DenseStepper(DenseStepper&&) noexcept;
  DenseStepper& operator=(DenseStepper&&) noexcept;

  void step();
  double t() const;
  double t_prev() const;
  const Eigen::VectorXd& x() const;
  const Eigen::VectorXd& x_prev() const;
  /// Valid for t in [t_prev(), t()].
  Eigen::VectorXd interpolate(double t) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Integrates from t0 to t1 and returns the final state.
Eigen::VectorXd integrate(const DenseStepper::Rhs& rhs, const Eigen::VectorXd& x0,
                          double t0, double t1, const OdeOptions& options = {});

/// Locates a sign change of g on the stepper's current interval by bisection
/// on the interpolant. Requires g(t_prev) and g(t) of opposite sign (or g(t)
/// zero); returns the time whose interpolated g is closest to zero.
double locate_root(const DenseStepper& stepper,
                   const std::function<double(const Eigen::VectorXd&)>& g,
                   double g_prev, double tol = 1e-15);

}  // namespace biped

#endif  // BIPED_ODE_HPP
