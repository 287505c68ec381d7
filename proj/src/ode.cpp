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

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>

namespace biped {

namespace odeint = boost::numeric::odeint;

namespace {
using Dopri5 = odeint::runge_kutta_dopri5<Eigen::VectorXd, double, Eigen::VectorXd, double,
                                          odeint::vector_space_algebra>;
}  // namespace

struct DenseStepper::Impl {
  using Base = Dopri5;
  using Dense = odeint::result_of::make_dense_output<Base>::type;

  Impl(Rhs f, const Eigen::VectorXd& x0, double t0, const OdeOptions& o)
      : rhs(std::move(f)),
        stepper(odeint::make_dense_output(o.atol, o.rtol, o.max_step, Base())),
        prev(x0) {
    stepper.initialize(x0, t0, o.initial_step);
  }

  Rhs rhs;
  Dense stepper;
  Eigen::VectorXd prev;
};

DenseStepper::DenseStepper(Rhs rhs, const Eigen::VectorXd& x0, double t0,
                           const OdeOptions& options)
    : impl_(std::make_unique<Impl>(std::move(rhs), x0, t0, options)) {}

DenseStepper::~DenseStepper() = default;
DenseStepper::DenseStepper(DenseStepper&&) noexcept = default;
DenseStepper& DenseStepper::operator=(DenseStepper&&) noexcept = default;

void DenseStepper::step() {
  impl_->prev = impl_->stepper.current_state();
  auto sys = [this](const Eigen::VectorXd& x, Eigen::VectorXd& dxdt, double t) {
    impl_->rhs(x, dxdt, t);
  };
  impl_->stepper.do_step(sys);
}

double DenseStepper::t() const { return impl_->stepper.current_time(); }
double DenseStepper::t_prev() const { return impl_->stepper.previous_time(); }
const Eigen::VectorXd& DenseStepper::x() const { return impl_->stepper.current_state(); }
const Eigen::VectorXd& DenseStepper::x_prev() const { return impl_->prev; }

Eigen::VectorXd DenseStepper::interpolate(double t) const {
  if (t >= this->t()) return x();
  if (t <= t_prev()) return x_prev();
  Eigen::VectorXd out(x().size());
  impl_->stepper.calc_state(t, out);
  return out;
}

Eigen::VectorXd integrate(const DenseStepper::Rhs& rhs, const Eigen::VectorXd& x0, double t0,
                          double t1, const OdeOptions& o) {
  using Base = Dopri5;
  auto stepper = odeint::make_controlled(o.atol, o.rtol, o.max_step, Base());
  Eigen::VectorXd x = x0;
  if (t1 == t0) return x;
  const double dt0 = std::min(o.initial_step, std::abs(t1 - t0));
  if (t1 > t0) {
    odeint::integrate_adaptive(stepper, rhs, x, t0, t1, dt0);
    return x;
  }
  // The step-size cap assumes forward time; integrate backward in tau = -t.
  auto reversed = [&rhs](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double tau) {
    rhs(y, dy, -tau);
    dy = -dy;
  };
  odeint::integrate_adaptive(stepper, reversed, x, -t0, -t1, dt0);
  return x;
}

double locate_root(const DenseStepper& s, const std::function<double(const Eigen::VectorXd&)>& g,
                   double g_prev, double tol) {
  double a = s.t_prev(), b = s.t();
  double fa = g_prev;
  double best_t = b;
  double best_f = std::abs(g(s.x()));
  if (std::abs(fa) < best_f) {
    best_f = std::abs(fa);
    best_t = a;
  }
  for (int it = 0; it < 200 && (b - a) > tol * std::max(1.0, std::abs(b)); ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = g(s.interpolate(mid));
    if (std::abs(fm) < best_f) {
      best_f = std::abs(fm);
      best_t = mid;
    }
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return best_t;
}

}  // namespace biped
