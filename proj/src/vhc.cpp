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

#include "biped/vhc.hpp"

#include <cmath>
#include <sstream>

#include "biped/angles.hpp"
#include "biped/errors.hpp"

namespace biped {

void VhcParams::validate(int n) const {
  const int m = n - 1;
  if (a.size() != m || k.size() != m || G.size() != m || H.size() != m) {
    throw ValidationError("[vhc]: a, k, G, H must each have n-1 = " + std::to_string(m) +
                          " entries");
  }
  auto finite = [](const Eigen::VectorXd& v) { return v.allFinite(); };
  if (!finite(a)) throw ValidationError("[vhc].a: non-finite entry");
  if (!finite(G)) throw ValidationError("[vhc].G: non-finite entry");
  if (!finite(H)) throw ValidationError("[vhc].H: non-finite entry");
  if (!std::isfinite(theta1_init)) throw ValidationError("[vhc].theta1_init: non-finite");
}

VhcParams VhcParams::five_link_table() {
  VhcParams p;
  p.a.resize(4);
  p.k.resize(4);
  p.G.resize(4);
  p.H.resize(4);
  p.a << 0.55, 0.0, -0.55, -1.6833;
  p.k << 0, 0, 1, 1;
  p.G << 0.2717, -0.4, 0.1342, -0.3795;
  p.H << 8, 8, 8, 10;
  p.theta1_init = kPi / 8.0;
  return p;
}

Gait::Gait(VhcParams params) : params_(std::move(params)) {
  params_.validate(params_.actuated() + 1);
}

Eigen::VectorXd Gait::theta(double t1) const {
  const VhcParams& p = params_;
  Eigen::VectorXd th(dof());
  th(0) = t1;
  for (int j = 0; j < p.actuated(); ++j) {
    th(j + 1) = p.a(j) * t1 + p.k(j) * kPi + p.G(j) * std::sin(p.H(j) * t1);
  }
  return th;
}

Eigen::VectorXd Gait::theta_prime(double t1) const {
  const VhcParams& p = params_;
  Eigen::VectorXd d(dof());
  d(0) = 1.0;
  for (int j = 0; j < p.actuated(); ++j) {
    d(j + 1) = p.a(j) + p.G(j) * p.H(j) * std::cos(p.H(j) * t1);
  }
  return d;
}

Eigen::VectorXd Gait::theta_double_prime(double t1) const {
  const VhcParams& p = params_;
  Eigen::VectorXd d(dof());
  d(0) = 0.0;
  for (int j = 0; j < p.actuated(); ++j) {
    d(j + 1) = -p.G(j) * p.H(j) * p.H(j) * std::sin(p.H(j) * t1);
  }
  return d;
}

namespace {

Eigen::VectorXd consecutive_diff(const Eigen::VectorXd& v) {
  return v.tail(v.size() - 1) - v.head(v.size() - 1);
}

}  // namespace

Eigen::VectorXd Gait::phi(double q2) const { return consecutive_diff(theta(q2)); }

Eigen::VectorXd Gait::phi_prime(double q2) const {
  return consecutive_diff(theta_prime(q2));
}

Eigen::VectorXd Gait::phi_double_prime(double q2) const {
  return consecutive_diff(theta_double_prime(q2));
}

Eigen::VectorXd Gait::offsets() const {
  Eigen::VectorXd o(params_.actuated());
  for (int c = 0; c < params_.actuated(); ++c) {
    const int prev = c == 0 ? 0 : params_.k(c - 1);
    o(c) = (params_.k(c) - prev) * kPi;
  }
  return o;
}

std::vector<PhiComponent> Gait::coefficients() const {
  const VhcParams& p = params_;
  std::vector<PhiComponent> out(p.actuated());
  auto add_term = [](PhiComponent& pc, double amp, double freq) {
    if (amp == 0.0) return;
    for (auto& t : pc.terms) {
      if (t.second == freq) {
        t.first += amp;
        return;
      }
    }
    pc.terms.emplace_back(amp, freq);
  };
  for (int c = 0; c < p.actuated(); ++c) {
    PhiComponent& pc = out[c];
    pc.slope = p.a(c) - (c == 0 ? 1.0 : p.a(c - 1));
    pc.offset_pi = p.k(c) - (c == 0 ? 0 : p.k(c - 1));
    add_term(pc, p.G(c), p.H(c));
    if (c > 0) add_term(pc, -p.G(c - 1), p.H(c - 1));
    std::erase_if(pc.terms, [](const auto& t) { return t.first == 0.0; });
  }
  return out;
}

Eigen::VectorXd constraint_residuals(const BipedParams& biped, const VhcParams& vhc) {
  const int n = biped.n;
  vhc.validate(n);
  const int L = (n - 1) / 2;
  const Gait gait(vhc);
  const Eigen::VectorXd th = gait.theta(vhc.theta1_init);
  const Eigen::VectorXd dth = gait.theta_prime(vhc.theta1_init);

  Eigen::VectorXd r(n + 1);
  int row = 0;
  for (int j = 0; j < L; ++j) r(row++) = wrap_angle(th(n - 1 - j) + th(j) - kPi);
  r(row++) = wrap_angle(th(L));
  for (int j = 0; j < L; ++j) r(row++) = dth(n - 1 - j) - dth(j);
  double foot = 0.0;
  for (int j = 0; j < L; ++j) foot += biped.length(j) * std::sin(th(j)) * dth(j);
  r(row++) = foot;
  return r;
}

FreeParameter FreeParameter::parse(const std::string& name) {
  FreeParameter f;
  if (name.size() < 2 || (name[0] != 'a' && name[0] != 'G')) {
    if (!name.empty() && (name[0] == 'H' || name[0] == 'k')) {
      throw ValidationError("free parameter '" + name +
                            "': H_j and k_j must be pinned");
    }
    throw ValidationError("free parameter '" + name + "': expected a<j> or G<j>");
  }
  f.kind = name[0];
  try {
    std::size_t pos = 0;
    f.link = std::stoi(name.substr(1), &pos);
    if (pos != name.size() - 1) throw std::invalid_argument(name);
  } catch (const std::exception&) {
    throw ValidationError("free parameter '" + name + "': bad link index");
  }
  if (f.link < 2) throw ValidationError("free parameter '" + name + "': link index >= 2");
  return f;
}

std::string FreeParameter::name() const { return std::string(1, kind) + std::to_string(link); }

namespace {

double& slot(VhcParams& p, const FreeParameter& f) {
  return f.kind == 'a' ? p.a(f.link - 2) : p.G(f.link - 2);
}

}  // namespace

SolveResult solve_parameters(const BipedParams& biped, const VhcParams& initial,
                             const std::vector<FreeParameter>& free,
                             const SolveOptions& options) {
  initial.validate(biped.n);
  if (free.empty()) throw ValidationError("solve_parameters: no free parameters");
  for (const auto& f : free) {
    if (f.link > biped.n) {
      throw ValidationError("free parameter " + f.name() + ": link index exceeds n");
    }
  }

  VhcParams cur = initial;
  const int nf = static_cast<int>(free.size());
  auto residual_at = [&](const Eigen::VectorXd& x) {
    VhcParams p = cur;
    for (int i = 0; i < nf; ++i) slot(p, free[i]) = x(i);
    return constraint_residuals(biped, p);
  };

  Eigen::VectorXd x(nf);
  for (int i = 0; i < nf; ++i) x(i) = slot(cur, free[i]);
  Eigen::VectorXd r = residual_at(x);
  double lambda = 1e-9;
  int iterations = 0;

  while (r.lpNorm<Eigen::Infinity>() >= options.tolerance) {
    if (iterations >= options.max_iterations) break;
    Eigen::MatrixXd J(r.size(), nf);
    for (int i = 0; i < nf; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      J.col(i) = (residual_at(xp) - residual_at(xm)) / (2.0 * h);
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const double scale = std::max(1.0, JtJ.diagonal().maxCoeff());
    bool accepted = false;
    while (lambda * scale < 1e12) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += lambda * scale;
      const Eigen::VectorXd step = -A.ldlt().solve(g);
      const Eigen::VectorXd rn = residual_at(x + step);
      if (rn.squaredNorm() < r.squaredNorm()) {
        x += step;
        r = rn;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;
    ++iterations;
  }

  const double norm = r.lpNorm<Eigen::Infinity>();
  if (norm >= options.tolerance) {
    std::ostringstream os;
    os << "no feasible parameters from this guess (residual inf-norm " << norm
       << " after " << iterations << " iterations; residuals " << r.transpose() << ")";
    throw NumericalError(os.str());
  }

  SolveResult out;
  for (int i = 0; i < nf; ++i) slot(cur, free[i]) = x(i);
  out.params = cur;
  out.iterations = iterations;
  out.residual_norm = norm;

  const double span = std::abs(cur.theta1_init) + 0.1;
  try {
    regularity_check(Biped(biped), Gait(cur), -span, span);
  } catch (const NumericalError& e) {
    out.warnings.emplace_back(e.what());
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> manifold_residual(const Gait& gait,
                                                              const State& x) {
  if (x.dof() != gait.dof()) {
    throw ValidationError("manifold_residual: state dimension does not match gait");
  }
  const double q2 = x.q2();
  Eigen::VectorXd rho = wrap_angles(x.q1() - gait.phi(q2));
  Eigen::VectorXd drho = x.dq1() - gait.phi_prime(q2) * x.dq2();
  return {rho, drho};
}

double regularity_denominator(const Biped& biped, const Gait& gait, double q2) {
  const int n = biped.dof();
  Eigen::VectorXd q(n);
  q << gait.phi(q2), q2;
  const Eigen::MatrixXd M = biped.mass_matrix(q);
  return M.row(n - 1).head(n - 1).dot(gait.phi_prime(q2)) + M(n - 1, n - 1);
}

double regularity_check(const Biped& biped, const Gait& gait, double lo, double hi,
                        const RegularityOptions& options) {
  if (!(hi > lo)) throw ValidationError("regularity_check: empty interval");
  const int npts = std::max(options.grid_points, 2);
  auto den = [&](double s) { return regularity_denominator(biped, gait, s); };
  double prev_s = lo;
  double prev = den(lo);
  double min_abs = std::abs(prev);
  for (int i = 1; i < npts; ++i) {
    const double s = lo + (hi - lo) * i / (npts - 1);
    const double d = den(s);
    min_abs = std::min(min_abs, std::abs(d));
    if (prev == 0.0 || d == 0.0 || (prev > 0.0) != (d > 0.0)) {
      double a = prev_s, b = s, fa = prev;
      for (int it = 0; it < 60 && fa != 0.0; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = den(mid);
        if ((fm > 0.0) == (fa > 0.0) && fm != 0.0) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      std::ostringstream os;
      os << "VHC not regular on operating range: M12^T Phi' + M22 changes sign near q2 = "
         << 0.5 * (a + b);
      throw NumericalError(os.str());
    }
    prev = d;
    prev_s = s;
  }
  return min_abs;
}

}  // namespace biped
