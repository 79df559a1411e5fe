#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

#include "cotrans/errors.hpp"
#include "cotrans/so3.hpp"

namespace cotrans {

/// Lumped-disturbance observer state for one vehicle. Invariant:
/// d_hat == z + gain * v for the velocity v of the last update.
template <typename Scalar>
struct ObserverState {
  Vector3<Scalar> z = Vector3<Scalar>::Zero();
  Vector3<Scalar> d_hat = Vector3<Scalar>::Zero();
};

template <typename Scalar>
Vector3<Scalar> disturbance_estimate(const Vector3<Scalar>& z, const Vector3<Scalar>& v, Scalar gain) {
  return z + gain * v;
}

template <typename Scalar>
ObserverState<Scalar> make_observer(const Vector3<Scalar>& z0, const Vector3<Scalar>& v0, Scalar gain) {
  return {z0, disturbance_estimate(z0, v0, gain)};
}

/// Advances the observer by dt given the new velocity sample v and the
/// acceleration command u held over the interval.
///
/// Solves z' = -gain (z + gain v + g e3 + u) exactly for a velocity that is
/// linear between samples. The previous velocity is recovered from the
/// invariant d_hat = z + gain v, so no extra state is carried.
template <typename Scalar>
ObserverState<Scalar> do_update(const ObserverState<Scalar>& obs, const Vector3<Scalar>& v,
                                const Vector3<Scalar>& u, Scalar gain, Scalar dt) {
  const Vector3<Scalar> v_prev = (obs.d_hat - obs.z) / gain;
  const Vector3<Scalar> accel = (v - v_prev) / dt;
  const Scalar decay = std::exp(-gain * dt);
  ObserverState<Scalar> next;
  next.d_hat = decay * obs.d_hat + (Scalar(1) - decay) * (accel - kGravity<Scalar> * e3<Scalar>() - u);
  next.z = next.d_hat - gain * v;
  return next;
}

// ---------------------------------------------------------------------------
// Quasi-static separation of thrust uncertainty from cable tension

template <typename Scalar>
struct SeparationInput {
  std::array<Vector3<Scalar>, 2> d_hat{Vector3<Scalar>::Zero(), Vector3<Scalar>::Zero()};
  std::array<Scalar, 2> pitch{0, 0};
  std::array<Scalar, 2> roll{0, 0};
  Scalar payload_mass{0};
  std::array<Scalar, 2> mass{0, 0};
};

template <typename Scalar>
struct EstimateBundle {
  std::array<Scalar, 2> thrust_uncertainty{0, 0};
  Scalar xi_z{0};
  std::array<Scalar, 2> vertical_tension{0, 0};
  Scalar delta_x{0};
  Scalar delta_z{0};

  Scalar consensus_error() const { return vertical_tension[1] - vertical_tension[0]; }
};

inline constexpr double kDefaultSeparationEpsilon = 0.05;

/// (Delta_x, Delta_z): mass-weighted sums of the horizontal and vertical
/// estimates, the vertical one net of the payload weight.
template <typename Scalar>
std::pair<Scalar, Scalar> compute_deltas(const SeparationInput<Scalar>& in) {
  const auto& d = in.d_hat;
  const Scalar dx = in.mass[0] * d[0].x() + in.mass[1] * d[1].x();
  const Scalar dz = in.mass[0] * d[0].z() + in.mass[1] * d[1].z() - in.payload_mass * kGravity<Scalar>;
  return {dx, dz};
}

namespace detail {

template <typename Scalar>
void check_separable(const SeparationInput<Scalar>& in, Scalar eps) {
  using std::abs;
  using std::tan;
  if (abs(tan(in.pitch[1]) - tan(in.pitch[0])) < eps)
    throw SingularGeometry("quadrotor pitch angles too close to separate thrust uncertainty");
  const Scalar roll_limit = std::numbers::pi_v<Scalar> / 2 - Scalar(0.01);
  for (const Scalar r : in.roll)
    if (!(abs(r) < roll_limit)) throw SingularGeometry("quadrotor roll angle outside separable range");
}

}  // namespace detail

template <typename Scalar>
std::array<Scalar, 2> separate_thrust_uncertainty(const SeparationInput<Scalar>& in,
                                                  Scalar eps = Scalar(kDefaultSeparationEpsilon)) {
  using std::cos;
  using std::sin;
  using std::tan;
  detail::check_separable(in, eps);
  const auto [dx, dz] = compute_deltas(in);
  const Scalar th1 = in.pitch[0], th2 = in.pitch[1];
  const Scalar df1 = (dx - dz * tan(th2)) / ((cos(th1) * tan(th2) - sin(th1)) * cos(in.roll[0]));
  const Scalar df2 = (dx - dz * tan(th1)) / ((cos(th2) * tan(th1) - sin(th2)) * cos(in.roll[1]));
  return {df1, df2};
}

template <typename Scalar>
Scalar estimate_xi_z(const SeparationInput<Scalar>& in, Scalar eps = Scalar(kDefaultSeparationEpsilon)) {
  using std::tan;
  detail::check_separable(in, eps);
  const auto [dx, dz] = compute_deltas(in);
  const Scalar t1 = tan(in.pitch[0]), t2 = tan(in.pitch[1]);
  return ((t1 + t2) * dz - 2 * dx) / (t2 - t1);
}

template <typename Scalar>
std::array<Scalar, 2> estimate_vertical_cable_forces(const SeparationInput<Scalar>& in,
                                                     const std::array<Scalar, 2>& thrust_uncertainty) {
  using std::cos;
  std::array<Scalar, 2> t{};
  for (int i = 0; i < 2; ++i)
    t[i] = in.mass[i] * in.d_hat[i].z() + thrust_uncertainty[i] * cos(in.pitch[i]) * cos(in.roll[i]);
  return t;
}

/// All separated quantities from one snapshot.
template <typename Scalar>
EstimateBundle<Scalar> separate(const SeparationInput<Scalar>& in, Scalar eps = Scalar(kDefaultSeparationEpsilon)) {
  EstimateBundle<Scalar> b;
  std::tie(b.delta_x, b.delta_z) = compute_deltas(in);
  b.thrust_uncertainty = separate_thrust_uncertainty(in, eps);
  b.xi_z = estimate_xi_z(in, eps);
  b.vertical_tension = estimate_vertical_cable_forces(in, b.thrust_uncertainty);
  return b;
}

}  // namespace cotrans
