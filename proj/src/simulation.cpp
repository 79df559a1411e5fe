#include <optional>
#include <random>

#include "cotrans/errors.hpp"
#include "cotrans/filters.hpp"
#include "cotrans/harness.hpp"
#include "cotrans/observer.hpp"

namespace cotrans {

namespace {

using Vec3 = Eigen::Vector3d;
using BundleVector = Eigen::Matrix<double, 7, 1>;

BundleVector to_vector(const EstimateBundle<double>& b) {
  BundleVector x;
  x << b.thrust_uncertainty[0], b.thrust_uncertainty[1], b.xi_z, b.vertical_tension[0], b.vertical_tension[1],
      b.delta_x, b.delta_z;
  return x;
}

EstimateBundle<double> from_vector(const BundleVector& x) {
  EstimateBundle<double> b;
  b.thrust_uncertainty = {x[0], x[1]};
  b.xi_z = x[2];
  b.vertical_tension = {x[3], x[4]};
  b.delta_x = x[5];
  b.delta_z = x[6];
  return b;
}

class SensorNoise {
 public:
  SensorNoise(std::uint64_t seed, double pos_sigma, double vel_sigma)
      : rng_(seed), pos_sigma_(pos_sigma), vel_sigma_(vel_sigma) {}

  RigidBodyState<double> measure(const RigidBodyState<double>& truth) {
    RigidBodyState<double> m = truth;
    if (pos_sigma_ > 0)
      for (int k = 0; k < 3; ++k) m.p[k] += pos_sigma_ * normal_(rng_);
    if (vel_sigma_ > 0)
      for (int k = 0; k < 3; ++k) m.v[k] += vel_sigma_ * normal_(rng_);
    return m;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double pos_sigma_;
  double vel_sigma_;
};

}  // namespace

std::vector<SimLogRow> run_simulation(const ScenarioConfig& cfg) {
  cfg.validate();

  SystemParams<double> plant = cfg.plant;
  plant.observer_gain = cfg.gains.iota;
  const double dt = cfg.dt;
  const std::size_t steps = cfg.step_count();
  const double g = kGravity<double>;

  SystemState<double> state = cfg.initial;
  SensorNoise noise(cfg.seed, cfg.position_noise, cfg.velocity_noise);
  LowPass<BundleVector> estimate_filter(cfg.estimate_cutoff);
  std::array<FilteredDifferentiator<Vec3>, 2> command_rate{
      FilteredDifferentiator<Vec3>(cfg.command_rate_cutoff, Vec3::Zero()),
      FilteredDifferentiator<Vec3>(cfg.command_rate_cutoff, Vec3::Zero())};

  std::vector<SimLogRow> rows;
  rows.reserve(steps + 1);

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const ControlMode mode = t >= cfg.mode_switch_time ? ControlMode::kForce : ControlMode::kPosition;

    SimLogRow row;
    row.t = t;
    row.mode = mode;

    std::array<Eigen::Matrix3d, 2> R;
    std::array<EulerAngles<double>, 2> quad_euler;
    for (int i = 0; i < 2; ++i) {
      R[i] = state.quad[i].R;
      quad_euler[i] = rotation_to_euler(R[i]);
      row.d_hat[i] = disturbance_estimate(state.z[i], state.quad[i].v, cfg.gains.iota);
    }

    // Separation uses the latest disturbance estimates; on singular geometry
    // the filtered bundle is held at its last value.
    SeparationInput<double> sep;
    sep.d_hat = row.d_hat;
    sep.pitch = {quad_euler[0].pitch, quad_euler[1].pitch};
    sep.roll = {quad_euler[0].roll, quad_euler[1].roll};
    sep.payload_mass = plant.payload.mass;
    sep.mass = {plant.quad[0].mass, plant.quad[1].mass};
    try {
      estimate_filter.update(to_vector(separate(sep, cfg.separation_epsilon)), dt);
      row.estimate_valid = true;
    } catch (const SingularGeometry&) {
      row.estimate_valid = false;
    }
    const EstimateBundle<double> estimate =
        estimate_filter.initialized() ? from_vector(estimate_filter.value()) : EstimateBundle<double>{};

    const RigidBodyState<double> m1 = noise.measure(state.quad[0]);
    const RigidBodyState<double> m2 = noise.measure(state.quad[1]);
    const ControlOutput<double> out =
        mode == ControlMode::kPosition
            ? position_coordination(m1, m2, cfg.refs, row.d_hat[0], row.d_hat[1], cfg.gains)
            : force_coordination(m1, m2, cfg.refs, row.d_hat[0], row.d_hat[1], estimate, cfg.gains);

    ActuationInput<double> act;
    for (int i = 0; i < 2; ++i) {
      const double mass = plant.quad[i].mass;
      const Vec3& u = out.u[i];
      if (!u.allFinite()) throw NonFiniteState(rows.empty() ? 0 : rows.size() - 1);
      act.thrust_cmd[i] = thrust_command(u, R[i], mass, cfg.max_thrust_ratio * mass * g).thrust;
      const Vec3 u_dot = command_rate[i].update(u, dt);
      const Vec3 omega_d = desired_body_rate(u, u_dot, R[i], mass, cfg.inner);
      act.torque[i] = attitude_torque(state.quad[i].omega, omega_d, plant.quad[i].inertia, cfg.inner.K_omega);
      act.thrust_uncertainty[i] = cfg.thrust_uncertainty[i] * act.thrust_cmd[i];
    }

    const SystemDerivative<double> deriv = system_derivative(state, act, plant);
    const std::array<const RigidBodyState<double>*, 3> bodies{&state.payload, &state.quad[0], &state.quad[1]};
    for (int b = 0; b < 3; ++b) {
      row.p[b] = bodies[b]->p;
      row.v[b] = bodies[b]->v;
      const EulerAngles<double> e = b == 0 ? rotation_to_euler(state.payload.R) : quad_euler[b - 1];
      row.euler[b] = Vec3(e.roll, e.pitch, e.yaw);
    }
    row.theta0 = row.euler[0].y();
    row.tension = deriv.tension;
    row.thrust_uncertainty_hat = estimate.thrust_uncertainty;
    row.vertical_tension_hat = estimate.vertical_tension;
    row.thrust_cmd = act.thrust_cmd;
    row.thrust_uncertainty = act.thrust_uncertainty;
    row.conservation_residual = deriv.tension[0].z() + deriv.tension[1].z() - plant.payload.mass * g;
    rows.push_back(row);

    if (k == steps) break;
    try {
      state = rk4_step(state, act, plant, dt);
    } catch (const NonFiniteState&) {
      throw NonFiniteState(rows.size() - 1);
    }
  }
  return rows;
}

}  // namespace cotrans
