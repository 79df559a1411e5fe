#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cotrans/coordination.hpp"
#include "cotrans/dynamics.hpp"
#include "cotrans/equilibrium.hpp"
#include "cotrans/inner_loop.hpp"

namespace cotrans {

enum class ControlMode : int {
  kPosition = 0,
  kForce = 1,
};

/// Everything a simulation run needs. Default-constructed values reproduce
/// the reference simulation scenario.
struct ScenarioConfig {
  SystemParams<double> plant = default_plant();
  ControlGains<double> gains;
  InnerLoopGains<double> inner;
  ReferenceSet<double> refs = default_refs();
  SystemState<double> initial = default_initial();

  /// Actual thrust error is thrust_uncertainty[i] * f_ic.
  std::array<double, 2> thrust_uncertainty{-0.2, -0.4};
  /// Thrust saturates at max_thrust_ratio * m_i g.
  double max_thrust_ratio{4.0};
  /// Low-pass cutoffs (rad/s) for the separated estimates and for the
  /// command derivative fed to the attitude loop.
  double estimate_cutoff{5.0};
  double command_rate_cutoff{20.0};
  double separation_epsilon{kDefaultSeparationEpsilon};

  double duration{30.0};
  double dt{1e-3};
  double mode_switch_time{10.0};

  /// Optional Gaussian noise on the position/velocity fed to the outer loop.
  std::uint64_t seed{0};
  double position_noise{0.0};
  double velocity_noise{0.0};

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  std::size_t step_count() const;
  Geometry geometry() const;

  static SystemParams<double> default_plant();
  static ReferenceSet<double> default_refs();
  static SystemState<double> default_initial();
};

/// Parses the INI-style scenario text. Missing keys keep their defaults;
/// unknown sections or keys are rejected.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct SimLogRow {
  double t{0};
  ControlMode mode{ControlMode::kPosition};
  bool estimate_valid{false};

  std::array<Eigen::Vector3d, 3> p{};      ///< payload, quad 1, quad 2
  std::array<Eigen::Vector3d, 3> v{};
  std::array<Eigen::Vector3d, 3> euler{};  ///< roll, pitch, yaw
  double theta0{0};

  std::array<Eigen::Vector3d, 2> tension{};  ///< true cable force on each quadrotor
  std::array<Eigen::Vector3d, 2> d_hat{};
  std::array<double, 2> thrust_uncertainty_hat{0, 0};
  std::array<double, 2> vertical_tension_hat{0, 0};
  std::array<double, 2> thrust_cmd{0, 0};
  std::array<double, 2> thrust_uncertainty{0, 0};
  /// t1z + t2z - m0 g from the true tensions.
  double conservation_residual{0};

  double consensus_error_hat() const { return vertical_tension_hat[1] - vertical_tension_hat[0]; }
};

/// Runs the closed loop from cfg.initial for cfg.duration. Returns one row
/// per step including t = 0 and the final time. Deterministic for a given
/// config.
std::vector<SimLogRow> run_simulation(const ScenarioConfig& cfg);

enum class LogFormat {
  kCsv,
};

std::vector<std::string> log_columns();

/// Writes every `decimation`-th row starting at the first.
void write_log(const std::vector<SimLogRow>& rows, const std::filesystem::path& path,
               LogFormat format = LogFormat::kCsv, int decimation = 1);

std::vector<SimLogRow> read_log(const std::filesystem::path& path);

}  // namespace cotrans
