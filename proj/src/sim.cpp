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

#include "biped/sim.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "biped/errors.hpp"
#include "biped/hybrid.hpp"

namespace biped {

ImpulseMode parse_impulse_mode(const std::string& s) {
  if (s == "ideal") return ImpulseMode::kIdeal;
  if (s == "highgain") return ImpulseMode::kHighGain;
  throw ValidationError("impulse mode must be 'ideal' or 'highgain', got '" + s + "'");
}

const char* to_string(ImpulseMode m) {
  return m == ImpulseMode::kIdeal ? "ideal" : "highgain";
}

void SimConfig::validate(int actuated) const {
  if (steps < 1) throw ValidationError("[sim].steps must be >= 1");
  if (mode == ImpulseMode::kHighGain) {
    high_gain.validate();
    if (high_gain.lambda.rows() != actuated) {
      throw ValidationError("[controller].lambda has the wrong dimension");
    }
  }
}

namespace {

void record_highgain(Sampler* sampler, const HighGainResult& hg, double t_start) {
  if (sampler == nullptr || !(sampler->dt > 0.0)) return;
  for (const auto& [t, x] : hg.samples) {
    if (t_start + t >= sampler->next) {
      sampler->samples.push_back({t_start + t, x});
      while (sampler->next <= t_start + t) sampler->next += sampler->dt;
    }
  }
}

}  // namespace

StepRecord execute_step(const StepSystem& sys, const IcpmController* controller,
                        const Eigen::VectorXd& z_star, const SimConfig& cfg, const State& x,
                        State* next, Sampler* sampler, double t_start) {
  const Walker& w = sys.walker;
  const Biped& biped = w.biped;
  const int n = biped.dof();

  StepRecord rec;
  rec.z = to_section_state(x);
  rec.norm_e = section_error(rec.z, z_star).norm();
  rec.impulse = controller != nullptr ? impulse_feedback(*controller, rec.z)
                                      : Eigen::VectorXd::Zero(n - 1);
  rec.energy_start = biped.total_energy(x);

  double t = t_start;
  State kicked;
  if (cfg.mode == ImpulseMode::kIdeal || rec.impulse.isZero(0.0)) {
    kicked = apply_impulse_ideal(biped, x, rec.impulse);
  } else {
    const State target = impulse_jump(biped, x, rec.impulse);
    HighGainResult hg;
    try {
      hg = apply_impulse_highgain(biped, cfg.high_gain, x,
                                  target.dq1() - x.dq1(), w.options.ode);
    } catch (const NumericalError& e) {
      throw StepFailure(e.what());
    }
    record_highgain(sampler, hg, t);
    kicked = hg.post;
    t += hg.duration;
  }

  const SwingResult down = integrate_swing(
      w, kicked, {SwingGoal::kTouchdown, sys.section.q2_star, sys.arm_q2()}, sampler, t);
  t += down.duration;
  ImpactResult impact;
  try {
    impact = impact_map(biped, down.exit);
  } catch (const NumericalError& e) {
    throw StepFailure(e.what());
  }
  rec.touchdown = down.exit;
  rec.touchdown_event = down.event;
  rec.ground_impulse = impact.ground_impulse;
  rec.kinetic_before = biped.kinetic_energy(down.exit.q, down.exit.dq);
  const ExtendedState pre_e = lift_extended(down.exit);
  // The old stance foot lifts off, so the post-impact energy needs the
  // extended model.
  rec.kinetic_after =
      0.5 * impact.dqe_post.dot(biped.extended_mass_matrix(pre_e.qe) * impact.dqe_post);
  rec.impact_constraint =
      (biped.swing_foot_jacobian(pre_e.qe) * impact.dqe_post).norm();

  const State swapped = relabel(impact.post);
  const SwingResult up = integrate_swing(
      w, swapped, {SwingGoal::kSection, sys.section.q2_star, sys.arm_q2()}, sampler, t);
  t += up.duration;

  rec.duration = t - t_start;
  rec.energy_end = biped.total_energy(up.exit);
  *next = up.exit;
  return rec;
}

RunResult run_gait(const StepSystem& sys, const IcpmController* controller,
                   const Eigen::VectorXd& z_star, const SimConfig& cfg, const State& x0) {
  cfg.validate(sys.dof() - 1);
  const auto wall = std::chrono::steady_clock::now();
  RunResult out;
  Sampler sampler;
  sampler.dt = cfg.sample_dt;
  Sampler* s = cfg.sample_dt > 0.0 ? &sampler : nullptr;

  State x = x0;
  double t = 0.0;
  out.section_states.push_back(to_section_state(x));
  for (int k = 0; k < cfg.steps; ++k) {
    State next;
    try {
      StepRecord rec = execute_step(sys, controller, z_star, cfg, x, &next, s, t);
      rec.k = k;
      t += rec.duration;
      out.steps.push_back(std::move(rec));
    } catch (const StepFailure& e) {
      if (k == 0) throw;
      out.failure = "step " + std::to_string(k) + ": " + e.what();
      break;
    }
    x = next;
    out.section_states.push_back(to_section_state(x));
  }
  for (auto& smp : sampler.samples) {
    out.trajectory.t.push_back(smp.t);
    out.trajectory.x.push_back(std::move(smp.x));
  }
  out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall).count();
  return out;
}

void write_trajectory_csv(std::ostream& os, const Biped& biped, const Gait& gait,
                          const TrajectoryLog& log) {
  const int n = biped.dof();
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",theta" << i;
  os << ",q2";
  for (int i = 1; i < n; ++i) os << ",q1_" << i;
  for (int i = 1; i < n; ++i) os << ",dq1_" << i;
  os << ",dq2";
  for (int i = 1; i < n; ++i) os << ",rho" << i;
  os << ",E\n";
  os << std::setprecision(10);
  for (std::size_t r = 0; r < log.t.size(); ++r) {
    const State& x = log.x[r];
    const AbsState a = gen_to_abs(x);
    const Eigen::VectorXd rho = manifold_residual(gait, x).first;
    os << log.t[r];
    for (int i = 0; i < n; ++i) os << ',' << a.theta(i);
    os << ',' << x.q2();
    for (int i = 0; i < n - 1; ++i) os << ',' << x.q(i);
    for (int i = 0; i < n - 1; ++i) os << ',' << x.dq(i);
    os << ',' << x.dq2();
    for (int i = 0; i < n - 1; ++i) os << ',' << rho(i);
    os << ',' << biped.total_energy(x) << '\n';
  }
}

void write_steps_csv(std::ostream& os, const std::vector<StepRecord>& steps) {
  const int m = steps.empty() ? 0 : static_cast<int>(steps.front().impulse.size());
  os << "k,dur,norm_e";
  for (int i = 1; i <= m; ++i) os << ",I_" << i;
  os << ",Ig_x,Ig_y,dT_impact\n";
  os << std::setprecision(10);
  for (const StepRecord& r : steps) {
    os << r.k << ',' << r.duration << ',' << r.norm_e;
    for (int i = 0; i < m; ++i) os << ',' << r.impulse(i);
    os << ',' << r.ground_impulse.x() << ',' << r.ground_impulse.y() << ','
       << r.kinetic_after - r.kinetic_before << '\n';
  }
}

}  // namespace biped
