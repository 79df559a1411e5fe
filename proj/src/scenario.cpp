#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cotrans/errors.hpp"
#include "cotrans/harness.hpp"

namespace cotrans {

namespace {

Eigen::Matrix3d diag(double a, double b, double c) { return Eigen::Vector3d(a, b, c).asDiagonal(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool positive_diagonal(const Eigen::Matrix3d& J) {
  return J.isDiagonal() && (J.diagonal().array() > 0).all();
}

/// Line of `key` inside `[section]`, or 0 when it cannot be located.
int find_line(std::string_view text, const std::string& section, const std::string& key) {
  std::istringstream in{std::string(text)};
  std::string line, current;
  for (int n = 1; std::getline(in, line); ++n) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '[') {
      current = line.substr(first + 1, line.find(']') - first - 1);
    } else if (current == section) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string k = line.substr(first, eq - first);
      k.erase(k.find_last_not_of(" \t") + 1);
      if (k == key) return n;
    }
  }
  return 0;
}

double to_double(const std::string& raw) {
  std::size_t used = 0;
  const double v = std::stod(raw, &used);
  if (raw.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(raw);
  return v;
}

using Setter = std::function<void(const std::string&)>;

void add_vector(std::map<std::string, Setter>& keys, const std::string& stem, Eigen::Vector3d& v) {
  keys[stem + "_x"] = [&v](const std::string& s) { v.x() = to_double(s); };
  keys[stem + "_y"] = [&v](const std::string& s) { v.y() = to_double(s); };
  keys[stem + "_z"] = [&v](const std::string& s) { v.z() = to_double(s); };
}

void add_scalar(std::map<std::string, Setter>& keys, const std::string& name, double& x) {
  keys[name] = [&x](const std::string& s) { x = to_double(s); };
}

void add_diagonal(std::map<std::string, Setter>& keys, const std::string& stem, Eigen::Matrix3d& J) {
  keys[stem + "_xx"] = [&J](const std::string& s) { J(0, 0) = to_double(s); };
  keys[stem + "_yy"] = [&J](const std::string& s) { J(1, 1) = to_double(s); };
  keys[stem + "_zz"] = [&J](const std::string& s) { J(2, 2) = to_double(s); };
}

/// Section -> key -> setter bound to `cfg`.
std::map<std::string, std::map<std::string, Setter>> key_table(ScenarioConfig& cfg, double& k_omega) {
  std::map<std::string, std::map<std::string, Setter>> t;
  auto& plant = cfg.plant;

  auto& bodies = t["bodies"];
  add_scalar(bodies, "m0", plant.payload.mass);
  add_scalar(bodies, "m1", plant.quad[0].mass);
  add_scalar(bodies, "m2", plant.quad[1].mass);
  add_scalar(bodies, "l0", plant.payload.length);
  add_scalar(bodies, "l1", plant.quad[0].length);
  add_scalar(bodies, "l2", plant.quad[1].length);
  add_diagonal(bodies, "J0", plant.payload.inertia);
  add_diagonal(bodies, "J1", plant.quad[0].inertia);
  add_diagonal(bodies, "J2", plant.quad[1].inertia);

  auto& cable = t["cable"];
  add_scalar(cable, "stiffness", plant.cable_stiffness);
  add_scalar(cable, "damping", plant.cable_damping);
  cable["layout"] = [&plant](const std::string& s) {
    if (s == "quad1_plus_end")
      plant.layout = CableLayout::kQuad1AtPlusEnd;
    else if (s == "quad1_minus_end")
      plant.layout = CableLayout::kQuad1AtMinusEnd;
    else
      throw std::invalid_argument(s);
  };

  auto& gains = t["gains"];
  add_scalar(gains, "k1", cfg.gains.k1);
  add_scalar(gains, "k2", cfg.gains.k2);
  add_scalar(gains, "k3", cfg.gains.k3);
  add_scalar(gains, "k4", cfg.gains.k4);
  add_scalar(gains, "k_f", cfg.gains.k_f);
  add_scalar(gains, "iota", cfg.gains.iota);

  auto& inner = t["inner_loop"];
  add_scalar(inner, "k_z", cfg.inner.k_z);
  add_scalar(inner, "k_omega", k_omega);
  add_scalar(inner, "c", cfg.inner.c);
  add_scalar(inner, "max_thrust_ratio", cfg.max_thrust_ratio);
  add_scalar(inner, "command_rate_cutoff", cfg.command_rate_cutoff);

  auto& refs = t["reference"];
  add_vector(refs, "p1d", cfg.refs.p1d);
  add_vector(refs, "p12d", cfg.refs.p12d);

  auto& init = t["initial"];
  add_vector(init, "p0", cfg.initial.payload.p);
  add_vector(init, "p1", cfg.initial.quad[0].p);
  add_vector(init, "p2", cfg.initial.quad[1].p);

  auto& unc = t["uncertainty"];
  add_scalar(unc, "c1", cfg.thrust_uncertainty[0]);
  add_scalar(unc, "c2", cfg.thrust_uncertainty[1]);

  auto& est = t["estimation"];
  add_scalar(est, "cutoff", cfg.estimate_cutoff);
  add_scalar(est, "epsilon", cfg.separation_epsilon);

  auto& sim = t["simulation"];
  add_scalar(sim, "duration", cfg.duration);
  add_scalar(sim, "dt", cfg.dt);
  add_scalar(sim, "mode_switch_time", cfg.mode_switch_time);
  add_scalar(sim, "position_noise", cfg.position_noise);
  add_scalar(sim, "velocity_noise", cfg.velocity_noise);
  sim["seed"] = [&cfg](const std::string& s) {
    std::size_t used = 0;
    cfg.seed = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  };
  return t;
}

}  // namespace

SystemParams<double> ScenarioConfig::default_plant() {
  SystemParams<double> p;
  p.payload = {0.44, diag(0.0035, 0.15, 0.15), 1.0};
  p.quad[0] = {0.87, diag(0.003, 0.003, 0.004), 0.8};
  p.quad[1] = {0.88, diag(0.003, 0.003, 0.004), 0.4};
  p.cable_stiffness = 5000;
  p.cable_damping = 50;
  p.layout = CableLayout::kQuad1AtPlusEnd;
  p.observer_gain = 5;
  return p;
}

ReferenceSet<double> ScenarioConfig::default_refs() {
  ReferenceSet<double> r;
  r.p1d = Eigen::Vector3d(1, 0, -1);
  r.p1d_dot.setZero();
  r.p12d = Eigen::Vector3d(2.5, 0, 0);
  return r;
}

SystemState<double> ScenarioConfig::default_initial() {
  SystemState<double> s;
  s.payload.p.setZero();
  s.quad[0].p = Eigen::Vector3d(1.4, 0.12, -0.68);
  s.quad[1].p = Eigen::Vector3d(-1.14, 0, -0.38);
  return s;
}

std::size_t ScenarioConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

Geometry ScenarioConfig::geometry() const {
  Geometry g;
  g.l0 = plant.payload.length;
  g.l1 = plant.quad[0].length;
  g.l2 = plant.quad[1].length;
  g.s = refs.p12d_xy().norm();
  g.m0 = plant.payload.mass;
  return g;
}

void ScenarioConfig::validate() const {
  require(plant.payload.mass > 0 && plant.quad[0].mass > 0 && plant.quad[1].mass > 0, "masses must be positive");
  require(plant.payload.length > 0 && plant.quad[0].length > 0 && plant.quad[1].length > 0,
          "pipe half-length and cable lengths must be positive");
  require(positive_diagonal(plant.payload.inertia) && positive_diagonal(plant.quad[0].inertia) &&
              positive_diagonal(plant.quad[1].inertia),
          "inertias must be diagonal with positive entries");
  require(plant.cable_stiffness > 0 && plant.cable_damping >= 0,
          "cable stiffness must be positive and damping non-negative");

  require(gains.k1 > 0 && gains.k2 > 0 && gains.k3 > 0 && gains.k4 > 0, "gains k1..k4 must be positive");
  require(gains.k_f >= 0, "force-consensus gain k_f must be non-negative");
  require(gains.iota > 0, "observer gain iota must be positive");
  require(inner.k_z > 0 && inner.c > 0 && positive_diagonal(inner.K_omega), "inner-loop gains must be positive");
  require(max_thrust_ratio > 1, "max_thrust_ratio must exceed 1 (hover needs m g)");
  require(estimate_cutoff > 0 && command_rate_cutoff > 0, "filter cutoffs must be positive");
  require(separation_epsilon > 0, "separation epsilon must be positive");

  const double l0 = plant.payload.length;
  const double span = refs.p12d_xy().norm();
  require(span > 2 * l0, "formation offset |p12d_xy| must exceed 2 l0 (positive internal force)");
  require(span < 2 * l0 + plant.quad[0].length + plant.quad[1].length,
          "formation offset |p12d_xy| must be below 2 l0 + l1 + l2 (reachability)");
  require(refs.p1d.allFinite() && refs.p12d.allFinite() && refs.p1d_dot.allFinite(), "references must be finite");

  for (const double c : thrust_uncertainty) require(c > -1, "thrust-uncertainty coefficients must exceed -1");

  require(dt > 0 && dt <= 0.01, "dt must lie in (0, 0.01]");
  require(duration > 0, "duration must be positive");
  require(mode_switch_time >= 0, "mode_switch_time must be non-negative");
  require(position_noise >= 0 && velocity_noise >= 0, "noise levels must be non-negative");

  require(is_rotation(initial.payload.R) && is_rotation(initial.quad[0].R) && is_rotation(initial.quad[1].R),
          "initial attitudes must be rotation matrices");
}

ScenarioConfig parse_scenario(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream msg;
    msg << "line " << e.line() << ": " << e.message();
    throw ParseError(msg.str());
  }

  ScenarioConfig cfg;
  double k_omega = cfg.inner.K_omega(0, 0);
  bool k_omega_set = false;
  auto table = key_table(cfg, k_omega);

  for (const auto& [section, entries] : tree) {
    const auto sec = table.find(section);
    if (!entries.data().empty() || sec == table.end())
      throw ParseError("line " + std::to_string(find_line(text, "", section)) + ": unknown section or top-level key '" +
                       section + "'");
    for (const auto& [key, node] : entries) {
      const int line = find_line(text, section, key);
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end())
        throw ParseError("line " + std::to_string(line) + ": unknown field [" + section + "] " + key);
      try {
        setter->second(node.data());
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": field [" + section + "] " + key + " has invalid value '" +
                         node.data() + "'");
      }
      if (section == "inner_loop" && key == "k_omega") k_omega_set = true;
    }
  }
  if (k_omega_set) cfg.inner.K_omega = k_omega * Eigen::Matrix3d::Identity();
  cfg.plant.observer_gain = cfg.gains.iota;

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

}  // namespace cotrans
