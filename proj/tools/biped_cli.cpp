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

// Command-line driver for the biped gait pipeline.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "biped/config.hpp"
#include "biped/errors.hpp"
#include "biped/hybrid.hpp"
#include "biped/io.hpp"
#include "biped/sim.hpp"
#include "biped/zerodyn.hpp"

namespace fs = std::filesystem;
using namespace biped;

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kStepFailure = 3, kNumerical = 4 };

struct Options {
  std::string config;
  std::string out;
  std::optional<int> steps;
  std::optional<double> perturb;
  std::string impulse_mode;
};

RunConfig effective_config(const Options& opt) {
  RunConfig cfg = opt.config.empty() ? RunConfig{} : load_config(opt.config);
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  if (opt.steps) cfg.steps = *opt.steps;
  if (opt.perturb) cfg.perturb = *opt.perturb;
  if (!opt.impulse_mode.empty()) cfg.impulse_mode = parse_impulse_mode(opt.impulse_mode);
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  std::ofstream eff(fs::path(cfg.output_dir) / "effective.cfg");
  write_config(eff, cfg);
  return cfg;
}

fs::path gait_file(const RunConfig& cfg) { return fs::path(cfg.output_dir) / "gait.cfg"; }

VhcParams resolve_gait(const RunConfig& cfg, bool required) {
  const fs::path p = gait_file(cfg);
  if (fs::exists(p)) return load_vhc(p.string());
  if (required) {
    throw ValidationError("missing gait file '" + p.string() + "'; run 'gait solve' first");
  }
  return cfg.vhc;
}

void print_vector(const char* label, const Eigen::VectorXd& v) {
  std::cout << label << " =";
  for (Eigen::Index i = 0; i < v.size(); ++i) std::cout << ' ' << v(i);
  std::cout << '\n';
}

// ---------------------------------------------------------------- model-check

int cmd_model_check(const RunConfig& cfg) {
  if (auto j = cfg.biped.leg_symmetry_violation(1e-12)) {
    throw ValidationError("leg symmetry violated at link pair " + std::to_string(*j));
  }
  const Biped biped(cfg.biped);
  const int n = biped.dof();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi), rate(-5.0, 5.0);

  double sym = 0.0, even = 0.0, min_eig = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd q(n), dq(n);
    for (int i = 0; i < n; ++i) {
      q(i) = angle(rng);
      dq(i) = rate(rng);
    }
    const Eigen::MatrixXd M = biped.mass_matrix(q);
    sym = std::max(sym, (M - M.transpose()).cwiseAbs().maxCoeff());
    even = std::max(even, (biped.mass_matrix(-q) - M).cwiseAbs().maxCoeff());
    even = std::max(even, std::abs(biped.potential_energy(-q) - biped.potential_energy(q)));
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M)
                                    .eigenvalues()
                                    .minCoeff());
  }

  // Passive flow from a tilted rest pose.
  State x0{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  x0.q(n - 1) = 0.2;
  x0.dq(n - 1) = -0.5;
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(n - 1);
  auto rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
    dy = biped.swing_dynamics(State::unpack(y), u0);
  };
  const State x1 = State::unpack(integrate(rhs, x0.packed(), 0.0, 1.0));
  const double e0 = biped.total_energy(x0);
  const double drift = std::abs(biped.total_energy(x1) - e0) / std::max(1.0, std::abs(e0));

  bool ok = true;
  auto report = [&](const char* name, double value, double tol, bool pass) {
    ok = ok && pass;
    std::cout << (pass ? "ok   " : "FAIL ") << std::left << std::setw(28) << name
              << std::scientific << std::setprecision(3) << value << "  (tol " << tol << ")\n"
              << std::defaultfloat;
  };
  report("mass matrix symmetry", sym, 1e-12, sym < 1e-12);
  report("mass matrix min eigenvalue", min_eig, 0.0, min_eig > 0.0);
  report("evenness of M and V", even, 1e-12, even < 1e-12);
  report("passive energy drift (1 s)", drift, 1e-6, drift < 1e-6);
  if (!ok) throw ValidationError("model check failed");
  std::cout << "model check passed\n";
  return kOk;
}

// ----------------------------------------------------------------------- gait

void report_regularity(const RunConfig& cfg, const VhcParams& vhc) {
  const ZeroDynamics zd = make_zero_dynamics(cfg, vhc);
  const double reg = regularity_check(zd.biped(), zd.gait(), zd.lo(), zd.hi());
  std::cout << "regularity min |M12'Phi' + M22| on [" << zd.lo() << ", " << zd.hi()
            << "] = " << reg << "\n";
}

int cmd_gait_check(const RunConfig& cfg) {
  const VhcParams vhc = resolve_gait(cfg, false);
  if (vhc.theta1_init == 0.0) std::cout << "warning: trivial gait (theta1_init = 0)\n";
  const Eigen::VectorXd r = constraint_residuals(cfg.biped, vhc);
  std::cout << std::setprecision(6);
  print_vector("residuals", r);
  const double inf = r.cwiseAbs().maxCoeff();
  std::cout << "residual inf-norm = " << inf << "\n";
  const Gait gait(vhc);
  for (const PhiComponent& c : gait.coefficients()) {
    std::cout << "  phi: " << c.slope << " q2";
    if (c.offset_pi != 0) std::cout << " + " << c.offset_pi << " pi";
    for (const auto& [amp, freq] : c.terms) std::cout << " + " << amp << " sin(" << freq << " q2)";
    std::cout << '\n';
  }
  report_regularity(cfg, vhc);
  if (!(inf < 1e-3)) {
    std::ostringstream os;
    os << "gait infeasible: residuals " << r.transpose();
    throw NumericalError(os.str());
  }
  return kOk;
}

int cmd_gait_solve(const RunConfig& cfg) {
  const auto free = refine_parameters(cfg);
  if (free.empty()) throw ValidationError("[vhc].refine: no free parameters given");
  if (cfg.vhc.theta1_init == 0.0) std::cout << "warning: trivial gait (theta1_init = 0)\n";
  const SolveResult res = solve_parameters(cfg.biped, cfg.vhc, free);
  for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
  std::cout << std::setprecision(10) << "converged in " << res.iterations
            << " iterations, residual norm " << res.residual_norm << "\n";
  for (const auto& f : free) {
    const int j = f.link - 2;
    std::cout << "  " << f.name() << " = " << (f.kind == 'a' ? res.params.a(j) : res.params.G(j))
              << "\n";
  }
  RunConfig solved = cfg;
  solved.vhc = res.params;
  std::ofstream out(gait_file(cfg));
  write_config(out, solved);
  std::cout << "wrote " << gait_file(cfg).string() << "\n";
  return kOk;
}

// -------------------------------------------------------------------- zerodyn

int cmd_zerodyn(const RunConfig& cfg) {
  const VhcParams vhc = resolve_gait(cfg, false);
  const ZeroDynamics zd = make_zero_dynamics(cfg, vhc);
  const auto samples = zd.profile(401);
  const fs::path csv = fs::path(cfg.output_dir) / "zerodyn.csv";
  {
    std::ofstream out(csv);
    out << "q2,alpha1,alpha2,psi,P\n" << std::setprecision(12);
    for (const auto& s : samples) {
      out << s.q2 << ',' << s.alpha1 << ',' << s.alpha2 << ',' << s.psi << ',' << s.potential
          << '\n';
    }
  }
  double odd = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    odd = std::max(odd, std::abs(samples[i].potential -
                                 samples[samples.size() - 1 - i].potential));
  }
  const auto ext = zd.potential_extrema();
  const double c = zd.energy(cfg.anchor_q2, cfg.anchor_dq2);
  std::cout << std::setprecision(10) << "P_min = " << ext.min << " at q2 = " << ext.argmin
            << "\nP_max = " << ext.max << " at q2 = " << ext.argmax
            << "\nc* = " << c << " (anchor " << cfg.anchor_q2 << ", " << cfg.anchor_dq2 << ")"
            << "\nmax |P(q2) - P(-q2)| on grid = " << odd << "\n";
  std::cout << "verdict: " << (c > ext.max ? "feasible" : "infeasible") << "\n";
  std::cout << "wrote " << csv.string() << "\n";
  if (!(c > ext.max)) throw ValidationError("[orbit]: infeasible orbit, c* <= P_max");
  return kOk;
}

// ------------------------------------------------------------------ stabilize

struct Pipeline {
  StepSystem sys;
  ZeroDynamics zd;
  Orbit orbit;
  Eigen::VectorXd z_star;
};

Pipeline build_pipeline(const RunConfig& cfg, const VhcParams& vhc) {
  StepSystem sys = make_step_system(cfg, vhc);
  ZeroDynamics zd = make_zero_dynamics(cfg, vhc);
  regularity_check(zd.biped(), zd.gait(), zd.lo(), zd.hi());
  Orbit orbit = make_orbit(zd, cfg.anchor_q2, cfg.anchor_dq2);
  Eigen::VectorXd z_star = find_fixed_point(sys, zd, orbit);
  return Pipeline{std::move(sys), std::move(zd), orbit, std::move(z_star)};
}

IcpmController design_controller(const RunConfig& cfg, const Pipeline& p) {
  const int n = cfg.biped.n;
  LinearizeOptions lo;
  lo.state_step = lo.impulse_step = cfg.fd_step;
  const Linearization lin = linearize(p.sys, p.z_star, lo);
  IcpmController ctl;
  ctl.z_star = p.z_star;
  ctl.A = lin.A;
  ctl.B = lin.B;
  ctl.Q = section_weight_q(n, cfg.q_angle, cfg.q_velocity);
  ctl.R = cfg.r_weight * Eigen::MatrixXd::Identity(n - 1, n - 1);
  ctl.K = lqr_gain(ctl.A, ctl.B, ctl.Q, ctl.R);
  return ctl;
}

int cmd_stabilize(const RunConfig& cfg) {
  const VhcParams vhc = resolve_gait(cfg, true);
  const Pipeline p = build_pipeline(cfg, vhc);
  const IcpmController ctl = design_controller(cfg, p);
  const fs::path dir(cfg.output_dir);
  write_matrix((dir / "z_star.txt").string(), p.z_star);
  write_matrix((dir / "A.txt").string(), ctl.A);
  write_matrix((dir / "B.txt").string(), ctl.B);
  write_matrix((dir / "K.txt").string(), ctl.K);

  std::cout << std::setprecision(10);
  print_vector("z*", p.z_star);
  const auto eig = Eigen::EigenSolver<Eigen::MatrixXd>(ctl.A, false).eigenvalues();
  std::cout << "open-loop eigenvalues |lambda|:";
  for (Eigen::Index i = 0; i < eig.size(); ++i) std::cout << ' ' << std::abs(eig(i));
  std::cout << "\nopen-loop spectral radius = " << spectral_radius(ctl.A)
            << "\ncontrollability rank = " << controllability_rank(ctl.A, ctl.B) << " of "
            << ctl.A.rows()
            << "\nclosed-loop spectral radius = " << spectral_radius(ctl.A + ctl.B * ctl.K)
            << "\nwrote z_star.txt A.txt B.txt K.txt to " << dir.string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------- simulate

int cmd_simulate(const RunConfig& cfg) {
  const VhcParams vhc = resolve_gait(cfg, false);
  const Pipeline p = build_pipeline(cfg, vhc);
  std::optional<IcpmController> ctl;
  if (cfg.icpm) ctl = design_controller(cfg, p);

  Eigen::VectorXd z0 = p.z_star;
  if (cfg.perturb > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd dir(z0.size());
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = normal(rng);
    z0 += cfg.perturb * dir.normalized();
  }
  const SimConfig sc = make_sim_config(cfg);
  const RunResult run = run_gait(p.sys, ctl ? &*ctl : nullptr, p.z_star, sc,
                                 from_section_state(p.sys.section, z0));

  const fs::path dir(cfg.output_dir);
  {
    std::ofstream out(dir / "trajectory.csv");
    write_trajectory_csv(out, p.sys.walker.biped, p.sys.walker.gait, run.trajectory);
  }
  {
    std::ofstream out(dir / "steps.csv");
    write_steps_csv(out, run.steps);
  }
  double total = 0.0;
  for (const auto& r : run.steps) total += r.duration;
  std::cout << std::setprecision(6) << "steps completed: " << run.steps.size() << " of "
            << cfg.steps << "\nimpulse mode: " << to_string(cfg.impulse_mode)
            << ", icpm: " << (cfg.icpm ? "on" : "off") << "\nsimulated time: " << total
            << " s\nfirst step duration: " << run.steps.front().duration << " s\n";
  std::cout << "||e(k)||:";
  for (std::size_t k = 0; k < run.section_states.size(); ++k) {
    std::cout << ' ' << std::scientific << std::setprecision(2)
              << section_error(run.section_states[k], p.z_star).norm();
  }
  std::cout << std::defaultfloat << "\nwrote trajectory.csv steps.csv to " << dir.string()
            << "\n";
  if (run.failure) {
    std::cerr << "step failure: " << *run.failure << "\n";
    return kStepFailure;
  }
  return kOk;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const StepFailure& e) {
    std::cerr << "step failure: " << e.what() << "\n";
    return kStepFailure;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-conserving gaits and impulse-controlled stabilization for planar bipeds"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "Output directory (overrides [output].dir)");
  app.add_option("--steps", opt.steps, "Number of steps (overrides [sim].steps)")
      ->check(CLI::PositiveNumber);
  app.add_option("--perturb", opt.perturb, "Initial section-state perturbation norm")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--impulse-mode", opt.impulse_mode, "ideal or highgain")
      ->check(CLI::IsMember({"ideal", "highgain"}));
  app.fallthrough();

  auto* model = app.add_subcommand("model-check", "Model invariant suite");
  auto* gait = app.add_subcommand("gait", "Constraint residuals or parameter solve");
  gait->require_subcommand(1);
  auto* gait_check = gait->add_subcommand("check", "Residuals and regularity of the gait");
  auto* gait_solve = gait->add_subcommand("solve", "Solve for the [vhc].refine parameters");
  auto* zerodyn = app.add_subcommand("zerodyn", "Zero-dynamics profile and orbit feasibility");
  auto* stabilize = app.add_subcommand("stabilize", "Fixed point, linearization and LQR gain");
  auto* simulate = app.add_subcommand("simulate", "Multi-step closed-loop simulation");
  for (auto* s : {gait, gait_check, gait_solve}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  return guarded([&]() -> int {
    const RunConfig cfg = effective_config(opt);
    if (model->parsed()) return cmd_model_check(cfg);
    if (gait_check->parsed()) return cmd_gait_check(cfg);
    if (gait_solve->parsed()) return cmd_gait_solve(cfg);
    if (zerodyn->parsed()) return cmd_zerodyn(cfg);
    if (stabilize->parsed()) return cmd_stabilize(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    return kValidation;
  });
}
