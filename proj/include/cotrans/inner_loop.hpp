#pragma once

#include <algorithm>
#include <cmath>

#include "cotrans/errors.hpp"
#include "cotrans/so3.hpp"

namespace cotrans {

template <typename Scalar>
struct InnerLoopGains {
  Scalar k_z{8};
  Matrix3<Scalar> K_omega = Scalar(0.2) * Matrix3<Scalar>::Identity();
  Scalar c{0.01};
};

template <typename Scalar>
struct ThrustCommand {
  Scalar thrust{0};
  bool saturated{false};
};

/// Collective thrust f = -m u^T R e3, clamped to [0, max_thrust].
template <typename Scalar>
ThrustCommand<Scalar> thrust_command(const Vector3<Scalar>& u, const Matrix3<Scalar>& R, Scalar mass,
                                     Scalar max_thrust) {
  const Scalar raw = -mass * u.dot(R.col(2));
  ThrustCommand<Scalar> out;
  out.thrust = std::clamp(raw, Scalar(0), max_thrust);
  out.saturated = out.thrust != raw;
  return out;
}

template <typename Scalar>
Vector3<Scalar> desired_direction(const Vector3<Scalar>& u) {
  const Scalar n = u.norm();
  if (!(n >= Scalar(1e-6))) throw ZeroAcceleration();
  return u / n;
}

/// Body-rate reference that steers the thrust axis -R e3 onto u/|u|.
///
/// The feedback term acts on -h_d: with NED and thrust along -b3, the
/// equilibrium Rᵀ(-h_d) = e3 is the one with positive collective thrust.
/// The second term feeds forward the rotation of h_d itself; its yaw
/// component is projected out.
template <typename Scalar>
Vector3<Scalar> desired_body_rate(const Vector3<Scalar>& u, const Vector3<Scalar>& u_dot,
                                  const Matrix3<Scalar>& R, Scalar mass, const InnerLoopGains<Scalar>& gains) {
  const Vector3<Scalar> h = desired_direction(u);
  const Scalar norm_u = u.norm();
  const Scalar gamma = std::sqrt(gains.c + mass * mass * u.squaredNorm());
  const Scalar gamma_dot = mass * mass * u.dot(u_dot) / gamma;
  const Matrix3<Scalar> I = Matrix3<Scalar>::Identity();
  const Vector3<Scalar> h_dot = (I - h * h.transpose()) * u_dot / norm_u;
  const Matrix3<Scalar> drop_z = I - e3<Scalar>() * e3<Scalar>().transpose();

  return (gains.k_z + gamma_dot / gamma) * hat(e3<Scalar>()) * R.transpose() * (-h) +
         drop_z * R.transpose() * hat(h) * h_dot;
}

template <typename Scalar>
Vector3<Scalar> attitude_torque(const Vector3<Scalar>& omega, const Vector3<Scalar>& omega_d,
                                const Matrix3<Scalar>& J, const Matrix3<Scalar>& K_omega) {
  return omega.cross(J * omega) - K_omega * (omega - omega_d);
}

}  // namespace cotrans
