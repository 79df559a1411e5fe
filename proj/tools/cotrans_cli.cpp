// Command-line front end: simulate, equilibrium, bounds, validate-gains.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cotrans/coordination.hpp"
#include "cotrans/equilibrium.hpp"
#include "cotrans/errors.hpp"
#include "cotrans/harness.hpp"

namespace {

using namespace cotrans;

constexpr double kDeg = std::numbers::pi / 180.0;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

ScenarioConfig scenario_or_default(const std::string& path) {
  return path.empty() ? ScenarioConfig{} : load_scenario(path);
}

int cmd_simulate(const std::string& scenario, const std::string& out, std::optional<double> duration,
                 std::optional<double> dt, std::optional<double> switch_time, int decimation) {
  ScenarioConfig cfg = scenario_or_default(scenario);
  if (duration) cfg.duration = *duration;
  if (dt) cfg.dt = *dt;
  if (switch_time) cfg.mode_switch_time = *switch_time;
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  const auto rows = run_simulation(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_log(rows, out, LogFormat::kCsv, decimation);

  const SimLogRow& last = rows.back();
  std::printf("steps        %zu (%.3f s wall)\n", rows.size() - 1, wall);
  std::printf("final t      %.3f s\n", last.t);
  std::printf("theta0       %.4f deg\n", last.theta0 / kDeg);
  std::printf("t2z - t1z    %.6f N (estimated)\n", last.consensus_error_hat());
  std::printf("t2z - t1z    %.6f N (true)\n", last.tension[1].z() - last.tension[0].z());
  std::printf("log          %s\n", out.c_str());
  return kExitOk;
}

int cmd_equilibrium(const std::string& scenario, std::optional<double> theta0_deg, std::optional<int> sweep,
                    const std::string& out, double theta_max_deg) {
  const ScenarioConfig cfg = scenario_or_default(scenario);
  const Geometry geo = cfg.geometry();

  if (theta0_deg) {
    const EquilibriumPoint pt = solve_internal_force(geo, *theta0_deg * kDeg);
    const auto [t1, t2] = equilibrium_cable_forces(pt, geo.m0);
    const SigmaSample sm = sigma_map(geo, pt.theta0);
    std::printf("theta0       %.6f deg\n", *theta0_deg);
    std::printf("t0           %.9f N\n", pt.t0);
    std::printf("k            %.9f\n", pt.k);
    std::printf("alpha        %.6f deg\n", pt.alpha / kDeg);
    std::printf("beta         %.6f deg\n", pt.beta / kDeg);
    std::printf("t1           [%.9f, %.9f, %.9f] N\n", t1.x(), t1.y(), t1.z());
    std::printf("t2           [%.9f, %.9f, %.9f] N\n", t2.x(), t2.y(), t2.z());
    std::printf("h2 - h1      %.9f m\n", quad2_height(geo, pt.theta0, 0.0));
    std::printf("sigma slope  %.9f N/m\n", sm.slope);
    std::printf("residual     %.3e m\n", pt.residual);
    return kExitOk;
  }

  const auto points = sigma_sweep(geo, theta_max_deg * kDeg, *sweep);
  std::ofstream csv(out);
  if (!csv) throw IoError("cannot open " + out + " for writing");
  csv << "theta0,t0,k,alpha,beta,h2,p2z_err,sigma,slope\n";
  char line[512];
  for (const auto& sp : points) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sp.point.theta0,
                  sp.point.t0, sp.point.k, sp.point.alpha, sp.point.beta, sp.h2, sp.p2z_err, sp.sigma, sp.slope);
    csv << line;
  }
  if (!csv) throw IoError("write to " + out + " failed");
  std::printf("wrote %zu sweep points to %s\n", points.size(), out.c_str());
  return kExitOk;
}

int cmd_bounds(const std::string& scenario, double theta_star_deg, double kappa_deg) {
  const ScenarioConfig cfg = scenario_or_default(scenario);
  const SectorBounds b = sector_bounds(cfg.geometry(), theta_star_deg * kDeg, kappa_deg * kDeg);
  std::printf("theta_star   %.4f deg\n", theta_star_deg);
  std::printf("kappa        %.4f deg\n", kappa_deg);
  std::printf("sigma_lo     %.6f N/m\n", b.sigma_lo);
  std::printf("sigma_hi     %.6f N/m\n", b.sigma_hi);
  std::printf("k_lo         %.6f\n", b.k_lo);
  std::printf("t0_max       %.6f N\n", b.t0_max);

  const ForceGainReport fr = validate_force_gains(cfg.gains, b, b.t0_max);
  std::printf("k4 > %.6f   %s (k4 = %g)\n", fr.k4_lower_bound, fr.k4_ok ? "ok" : "violated", cfg.gains.k4);
  std::printf("k_f < %.6g  %s (k_f = %g)\n", fr.kf_upper_bound, fr.kf_ok ? "ok" : "violated", cfg.gains.k_f);
  return kExitOk;
}

int cmd_validate_gains(const std::string& scenario) {
  const ScenarioConfig cfg = scenario_or_default(scenario);
  const GainReport r = validate_gains(cfg.gains);
  std::printf("p(s) coefficients:");
  for (const double c : r.coefficients) std::printf(" %g", c);
  std::printf("\nRouth first column:");
  for (const double c : r.routh_column) std::printf(" %.6g", c);
  std::printf("\nRouth        %s\n", r.routh_pass ? "PASS" : "FAIL");
  std::printf("max Re(eig)  %.6g\n", r.max_real_part);
  std::printf("eigenvalues  %s\n", r.eigen_pass ? "PASS" : "FAIL");
  std::printf("%s\n", r.pass() ? "PASS" : "FAIL");
  return r.pass() ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative cable-suspended pipe transport: simulation and analysis"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;

  auto* sim = app.add_subcommand("simulate", "Run the closed-loop simulation and write a CSV log");
  std::optional<double> duration, dt, switch_time;
  int decimation = 10;
  sim->add_option("--scenario", scenario, "Scenario INI file (defaults to the reference scenario)");
  sim->add_option("--out", out, "Output CSV path")->required();
  sim->add_option("--duration", duration, "Simulated time, s");
  sim->add_option("--dt", dt, "Integration step, s");
  sim->add_option("--switch", switch_time, "Time of the switch to force coordination, s");
  sim->add_option("--decimation", decimation, "Write every N-th step")->capture_default_str();

  auto* eq = app.add_subcommand("equilibrium", "Static equilibrium of the four-bar abstraction");
  std::optional<double> theta0;
  std::optional<int> sweep;
  double theta_max = 30.0;
  eq->add_option("--scenario", scenario, "Scenario INI file");
  auto* theta_opt = eq->add_option("--theta0", theta0, "Pipe angle, deg (positive raises the cable-2 end)");
  auto* sweep_opt = eq->add_option("--sweep", sweep, "Number of evenly spaced angles in the sweep");
  eq->add_option("--theta-max", theta_max, "Sweep half-range, deg")->capture_default_str();
  eq->add_option("--out", out, "Sweep CSV path");
  theta_opt->excludes(sweep_opt);
  eq->require_option(1, 3);

  auto* bd = app.add_subcommand("bounds", "Sector bounds of the tension-imbalance map");
  double theta_star = 30.0, kappa = 60.0;
  bd->add_option("--scenario", scenario, "Scenario INI file");
  bd->add_option("--theta-star", theta_star, "Pipe-angle bound, deg")->capture_default_str();
  bd->add_option("--kappa", kappa, "Cable-angle bound, deg")->capture_default_str();

  auto* vg = app.add_subcommand("validate-gains", "Routh-Hurwitz and eigenvalue check of k1..k4");
  vg->add_option("--scenario", scenario, "Scenario INI file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (sim->parsed()) return cmd_simulate(scenario, out, duration, dt, switch_time, decimation);
    if (eq->parsed()) {
      if (!theta0 && !sweep) throw ValidationError("equilibrium needs --theta0 or --sweep");
      if (sweep && out.empty()) throw ValidationError("--sweep needs --out");
      return cmd_equilibrium(scenario, theta0, sweep, out, theta_max);
    }
    if (bd->parsed()) return cmd_bounds(scenario, theta_star, kappa);
    if (vg->parsed()) return cmd_validate_gains(scenario);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
