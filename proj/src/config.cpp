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

#include "biped/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "biped/errors.hpp"

namespace biped {

namespace pt = boost::property_tree;

namespace {

std::string key_path(const std::string& section, const std::string& key) {
  return "[" + section + "]." + key;
}

std::vector<std::string> tokens(const std::string& s) {
  std::string t = s;
  for (char& c : t) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& s, const std::string& path) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v;
  if (!(is >> v) || !(is >> std::ws).eof() || !std::isfinite(v)) {
    throw ValidationError(path + ": expected a number, got '" + s + "'");
  }
  return v;
}

long long to_int(const std::string& s, const std::string& path) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ValidationError(path + ": expected an integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& s, const std::string& path) {
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw ValidationError(path + ": expected on/off, got '" + s + "'");
}

// Reads keys of one section, tracking which were consumed.
class SectionReader {
 public:
  SectionReader(const pt::ptree& root, std::string name) : name_(std::move(name)) {
    if (auto child = root.get_child_optional(name_)) node_ = &*child;
  }

  void number(const char* key, double& out) {
    if (auto s = raw(key)) out = to_double(*s, key_path(name_, key));
  }
  void integer(const char* key, int& out) {
    if (auto s = raw(key)) out = static_cast<int>(to_int(*s, key_path(name_, key)));
  }
  void seed(const char* key, std::uint64_t& out) {
    if (auto s = raw(key)) {
      const long long v = to_int(*s, key_path(name_, key));
      if (v < 0) throw ValidationError(key_path(name_, key) + ": must be >= 0");
      out = static_cast<std::uint64_t>(v);
    }
  }
  void flag(const char* key, bool& out) {
    if (auto s = raw(key)) out = to_bool(*s, key_path(name_, key));
  }
  void text(const char* key, std::string& out) {
    if (auto s = raw(key)) out = *s;
  }
  void vector(const char* key, Eigen::VectorXd& out) {
    if (auto s = raw(key)) {
      const auto t = tokens(*s);
      out.resize(static_cast<Eigen::Index>(t.size()));
      for (std::size_t i = 0; i < t.size(); ++i) out(i) = to_double(t[i], key_path(name_, key));
    }
  }
  void ivector(const char* key, Eigen::VectorXi& out) {
    if (auto s = raw(key)) {
      const auto t = tokens(*s);
      out.resize(static_cast<Eigen::Index>(t.size()));
      for (std::size_t i = 0; i < t.size(); ++i) {
        out(i) = static_cast<int>(to_int(t[i], key_path(name_, key)));
      }
    }
  }
  void words(const char* key, std::vector<std::string>& out) {
    if (auto s = raw(key)) out = tokens(*s);
  }

  void reject_unknown() const {
    if (node_ == nullptr) return;
    for (const auto& [k, v] : *node_) {
      if (!used_.count(k)) throw ValidationError(key_path(name_, k) + ": unknown key");
    }
  }

 private:
  std::optional<std::string> raw(const char* key) {
    used_.insert(key);
    if (node_ == nullptr) return std::nullopt;
    auto v = node_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  }

  std::string name_;
  const pt::ptree* node_ = nullptr;
  std::set<std::string> used_;
};

void read_vhc(const pt::ptree& root, VhcParams& vhc, std::vector<std::string>* refine) {
  SectionReader r(root, "vhc");
  r.vector("a", vhc.a);
  r.ivector("k", vhc.k);
  r.vector("G", vhc.G);
  r.vector("H", vhc.H);
  r.number("theta1_init", vhc.theta1_init);
  std::vector<std::string> ignored;
  r.words("refine", refine != nullptr ? *refine : ignored);
  r.reject_unknown();
}

pt::ptree read_tree(std::istream& is) {
  pt::ptree root;
  try {
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return root;
}

std::string join(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v(i);
  return os.str();
}

std::string join(const Eigen::VectorXi& v) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v(i);
  return os.str();
}

void write_vhc(std::ostream& os, const VhcParams& vhc, const std::vector<std::string>& refine) {
  os << "[vhc]\n";
  os << "a = " << join(vhc.a) << "\n";
  os << "k = " << join(vhc.k) << "\n";
  os << "G = " << join(vhc.G) << "\n";
  os << "H = " << join(vhc.H) << "\n";
  os << "theta1_init = " << vhc.theta1_init << "\n";
  os << "refine =";
  for (const auto& r : refine) os << ' ' << r;
  os << "\n\n";
}

}  // namespace

void RunConfig::validate() const {
  biped.validate();
  vhc.validate(biped.n);
  for (const auto& r : refine) {
    FreeParameter f;
    try {
      f = FreeParameter::parse(r);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("[vhc].refine: ") + e.what());
    }
    if (f.link > biped.n) throw ValidationError("[vhc].refine: " + r + " exceeds the link count");
  }
  if (!(kp > 0.0)) throw ValidationError("[controller].kp must be > 0");
  if (!(kd > 0.0)) throw ValidationError("[controller].kd must be > 0");
  if (!(hg_lambda > 0.0)) throw ValidationError("[controller].lambda must be > 0");
  if (!(hg_mu > 0.0)) throw ValidationError("[controller].mu must be > 0");
  if (!(hg_stop_tol > 0.0)) throw ValidationError("[controller].stop_tol must be > 0");
  if (!(q_angle > 0.0)) throw ValidationError("[icpm].q_angle must be > 0");
  if (!(q_velocity > 0.0)) throw ValidationError("[icpm].q_velocity must be > 0");
  if (!(r_weight > 0.0)) throw ValidationError("[icpm].r must be > 0");
  if (!(fd_step > 0.0)) throw ValidationError("[icpm].fd_step must be > 0");
  if (!(swing.ode.rtol > 0.0)) throw ValidationError("[sim].rtol must be > 0");
  if (!(swing.ode.atol > 0.0)) throw ValidationError("[sim].atol must be > 0");
  if (!(swing.ode.max_step > 0.0)) throw ValidationError("[sim].max_step must be > 0");
  if (!(swing.graze_depth >= 0.0)) throw ValidationError("[sim].graze_depth must be >= 0");
  if (swing.step_budget < 1) throw ValidationError("[sim].step_budget must be >= 1");
  if (steps < 1) throw ValidationError("[sim].steps must be >= 1");
  if (!(perturb >= 0.0)) throw ValidationError("[sim].perturb must be >= 0");
  if (interval_hi < interval_lo) throw ValidationError("[orbit].hi must be >= [orbit].lo");
  if (output_dir.empty()) throw ValidationError("[output].dir must not be empty");
}

RunConfig parse_config(std::istream& is) {
  const pt::ptree root = read_tree(is);
  static const std::set<std::string> kSections = {"biped",   "vhc",  "orbit", "controller",
                                                  "icpm",    "sim",  "output"};
  for (const auto& [name, node] : root) {
    if (!kSections.count(name)) throw ValidationError("[" + name + "]: unknown section");
  }

  RunConfig c;
  {
    SectionReader r(root, "biped");
    r.integer("n", c.biped.n);
    r.vector("ell", c.biped.length);
    r.vector("d", c.biped.com);
    r.vector("m", c.biped.mass);
    r.vector("J", c.biped.inertia);
    r.number("g", c.biped.g);
    r.reject_unknown();
  }
  read_vhc(root, c.vhc, &c.refine);
  {
    SectionReader r(root, "orbit");
    r.number("anchor_q2", c.anchor_q2);
    r.number("anchor_dq2", c.anchor_dq2);
    r.number("lo", c.interval_lo);
    r.number("hi", c.interval_hi);
    r.reject_unknown();
  }
  {
    SectionReader r(root, "controller");
    r.number("kp", c.kp);
    r.number("kd", c.kd);
    std::string mode = to_string(c.impulse_mode);
    r.text("impulse_mode", mode);
    try {
      c.impulse_mode = parse_impulse_mode(mode);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("[controller].impulse_mode: ") + e.what());
    }
    r.number("lambda", c.hg_lambda);
    r.number("mu", c.hg_mu);
    r.number("stop_tol", c.hg_stop_tol);
    r.reject_unknown();
  }
  {
    SectionReader r(root, "icpm");
    r.number("section_q2", c.section_q2);
    r.number("q_angle", c.q_angle);
    r.number("q_velocity", c.q_velocity);
    r.number("r", c.r_weight);
    r.number("fd_step", c.fd_step);
    r.reject_unknown();
  }
  {
    SectionReader r(root, "sim");
    r.number("rtol", c.swing.ode.rtol);
    r.number("atol", c.swing.ode.atol);
    r.number("max_step", c.swing.ode.max_step);
    r.number("graze_depth", c.swing.graze_depth);
    r.integer("step_budget", c.swing.step_budget);
    r.number("max_duration", c.swing.max_duration);
    r.integer("steps", c.steps);
    r.number("sample_dt", c.sample_dt);
    r.flag("icpm", c.icpm);
    r.seed("seed", c.seed);
    r.number("perturb", c.perturb);
    r.reject_unknown();
  }
  {
    SectionReader r(root, "output");
    r.text("dir", c.output_dir);
    r.reject_unknown();
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_config(in);
}

VhcParams load_vhc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open gait file '" + path + "'");
  const pt::ptree root = read_tree(in);
  if (!root.get_child_optional("vhc")) throw ValidationError(path + ": missing [vhc] section");
  VhcParams vhc;
  read_vhc(root, vhc, nullptr);
  vhc.validate(vhc.actuated() + 1);
  return vhc;
}

void write_config(std::ostream& os, const RunConfig& c) {
  os.imbue(std::locale::classic());
  const auto old = os.precision(17);
  os << "[biped]\n";
  os << "n = " << c.biped.n << "\n";
  os << "ell = " << join(c.biped.length) << "\n";
  os << "d = " << join(c.biped.com) << "\n";
  os << "m = " << join(c.biped.mass) << "\n";
  os << "J = " << join(c.biped.inertia) << "\n";
  os << "g = " << c.biped.g << "\n\n";
  write_vhc(os, c.vhc, c.refine);
  os << "[orbit]\n";
  os << "anchor_q2 = " << c.anchor_q2 << "\n";
  os << "anchor_dq2 = " << c.anchor_dq2 << "\n";
  os << "lo = " << c.interval_lo << "\n";
  os << "hi = " << c.interval_hi << "\n\n";
  os << "[controller]\n";
  os << "kp = " << c.kp << "\n";
  os << "kd = " << c.kd << "\n";
  os << "impulse_mode = " << to_string(c.impulse_mode) << "\n";
  os << "lambda = " << c.hg_lambda << "\n";
  os << "mu = " << c.hg_mu << "\n";
  os << "stop_tol = " << c.hg_stop_tol << "\n\n";
  os << "[icpm]\n";
  os << "section_q2 = " << c.section_q2 << "\n";
  os << "q_angle = " << c.q_angle << "\n";
  os << "q_velocity = " << c.q_velocity << "\n";
  os << "r = " << c.r_weight << "\n";
  os << "fd_step = " << c.fd_step << "\n\n";
  os << "[sim]\n";
  os << "rtol = " << c.swing.ode.rtol << "\n";
  os << "atol = " << c.swing.ode.atol << "\n";
  os << "max_step = " << c.swing.ode.max_step << "\n";
  os << "graze_depth = " << c.swing.graze_depth << "\n";
  os << "step_budget = " << c.swing.step_budget << "\n";
  os << "max_duration = " << c.swing.max_duration << "\n";
  os << "steps = " << c.steps << "\n";
  os << "sample_dt = " << c.sample_dt << "\n";
  os << "icpm = " << (c.icpm ? "on" : "off") << "\n";
  os << "seed = " << c.seed << "\n";
  os << "perturb = " << c.perturb << "\n\n";
  os << "[output]\n";
  os << "dir = " << c.output_dir << "\n";
  os.precision(old);
}

Walker make_walker(const RunConfig& cfg, const VhcParams& vhc) {
  return Walker{Biped(cfg.biped), Gait(vhc),
                ContinuousGains::uniform(cfg.biped.n - 1, cfg.kp, cfg.kd), cfg.swing};
}

StepSystem make_step_system(const RunConfig& cfg, const VhcParams& vhc) {
  return StepSystem{make_walker(cfg, vhc), Section{cfg.section_q2}};
}

ZeroDynamics make_zero_dynamics(const RunConfig& cfg, const VhcParams& vhc) {
  if (cfg.interval_lo == cfg.interval_hi) return ZeroDynamics(Biped(cfg.biped), Gait(vhc));
  return ZeroDynamics(Biped(cfg.biped), Gait(vhc), cfg.interval_lo, cfg.interval_hi);
}

SimConfig make_sim_config(const RunConfig& cfg) {
  SimConfig s;
  s.steps = cfg.steps;
  s.mode = cfg.impulse_mode;
  s.icpm = cfg.icpm;
  s.sample_dt = cfg.sample_dt;
  const int m = cfg.biped.n - 1;
  s.high_gain.lambda = cfg.hg_lambda * Eigen::MatrixXd::Identity(m, m);
  s.high_gain.mu = cfg.hg_mu;
  s.high_gain.stop_tol = cfg.hg_stop_tol;
  return s;
}

std::vector<FreeParameter> refine_parameters(const RunConfig& cfg) {
  std::vector<FreeParameter> out;
  for (const auto& r : cfg.refine) out.push_back(FreeParameter::parse(r));
  return out;
}

}  // namespace biped
