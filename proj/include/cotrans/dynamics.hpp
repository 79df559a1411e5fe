#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>

#include "cotrans/errors.hpp"
#include "cotrans/rk4.hpp"
#include "cotrans/so3.hpp"

namespace cotrans {

/// Position, velocity and attitude of one rigid body. Position and velocity
/// live in the NED inertial frame, `omega` is the body-frame angular rate and
/// `R` maps body vectors to the inertial frame.
template <typename Scalar>
struct RigidBodyState {
  Vector3<Scalar> p = Vector3<Scalar>::Zero();
  Vector3<Scalar> v = Vector3<Scalar>::Zero();
  Matrix3<Scalar> R = Matrix3<Scalar>::Identity();
  Vector3<Scalar> omega = Vector3<Scalar>::Zero();
};

template <typename Scalar>
struct BodyDerivative {
  Vector3<Scalar> p_dot = Vector3<Scalar>::Zero();
  Vector3<Scalar> v_dot = Vector3<Scalar>::Zero();
  Matrix3<Scalar> R_dot = Matrix3<Scalar>::Zero();
  Vector3<Scalar> omega_dot = Vector3<Scalar>::Zero();
};

/// Mass properties. `length` is the cable length for a quadrotor and the
/// half-length of the pipe for the payload.
template <typename Scalar>
struct BodyParams {
  Scalar mass{1};
  Matrix3<Scalar> inertia = Matrix3<Scalar>::Identity();
  Scalar length{1};
};

/// Unilateral spring-damper standing in for a taut, massless cable.
template <typename Scalar>
struct CableParams {
  Scalar stiffness{5000};
  Scalar damping{50};
  Scalar rest_length{1};
};

/// Which end of the pipe each quadrotor hangs from. The pipe's body x-axis
/// points from the minus end to the plus end.
enum class CableLayout {
  kQuad1AtMinusEnd,
  kQuad1AtPlusEnd,
};

template <typename Scalar>
struct SystemParams {
  BodyParams<Scalar> payload;
  std::array<BodyParams<Scalar>, 2> quad;
  Scalar cable_stiffness{5000};
  Scalar cable_damping{50};
  CableLayout layout{CableLayout::kQuad1AtPlusEnd};
  Scalar observer_gain{5};

  CableParams<Scalar> cable(int i) const {
    return {cable_stiffness, cable_damping, quad[i].length};
  }
};

template <typename Scalar>
struct SystemState {
  RigidBodyState<Scalar> payload;
  std::array<RigidBodyState<Scalar>, 2> quad;
  /// Disturbance-observer auxiliary states, one per quadrotor.
  std::array<Vector3<Scalar>, 2> z{Vector3<Scalar>::Zero(), Vector3<Scalar>::Zero()};
};

/// Held constant across one integration step.
template <typename Scalar>
struct ActuationInput {
  std::array<Scalar, 2> thrust_cmd{0, 0};
  std::array<Vector3<Scalar>, 2> torque{Vector3<Scalar>::Zero(), Vector3<Scalar>::Zero()};
  std::array<Scalar, 2> thrust_uncertainty{0, 0};
};

template <typename Scalar>
struct SystemDerivative {
  BodyDerivative<Scalar> payload;
  std::array<BodyDerivative<Scalar>, 2> quad;
  std::array<Vector3<Scalar>, 2> z_dot;
  /// Cable tension acting on each quadrotor (the payload receives the negative).
  std::array<Vector3<Scalar>, 2> tension;
};

inline constexpr int kBodyStateSize = 18;
inline constexpr int kSystemStateSize = 3 * kBodyStateSize + 6;

template <typename Scalar>
using SystemVector = Eigen::Matrix<Scalar, kSystemStateSize, 1>;

// ---------------------------------------------------------------------------
// Geometry and forces

/// Attachment points (a1, a2) of cable 1 and cable 2 on the pipe.
template <typename Scalar>
std::pair<Vector3<Scalar>, Vector3<Scalar>> attachment_points(const RigidBodyState<Scalar>& payload,
                                                              Scalar l0, CableLayout layout) {
  const Vector3<Scalar> half = l0 * payload.R.col(0);
  if (layout == CableLayout::kQuad1AtMinusEnd) return {payload.p - half, payload.p + half};
  return {payload.p + half, payload.p - half};
}

/// Body-frame offsets of the two attachment points from the pipe's centre.
template <typename Scalar>
std::array<Vector3<Scalar>, 2> attachment_offsets(Scalar l0, CableLayout layout) {
  const Vector3<Scalar> half = l0 * e1<Scalar>();
  if (layout == CableLayout::kQuad1AtMinusEnd) return {Vector3<Scalar>(-half), half};
  return {half, Vector3<Scalar>(-half)};
}

template <typename Scalar>
std::pair<Vector3<Scalar>, Vector3<Scalar>> attachment_velocities(const RigidBodyState<Scalar>& payload,
                                                                  Scalar l0, CableLayout layout) {
  const auto r = attachment_offsets(l0, layout);
  return {payload.v + payload.R * payload.omega.cross(r[0]),
          payload.v + payload.R * payload.omega.cross(r[1])};
}

/// Tension on the quadrotor, pointing from its centre of mass toward the
/// attachment point. Zero while the cable is slack.
template <typename Scalar>
Vector3<Scalar> cable_force(const RigidBodyState<Scalar>& quad, const Vector3<Scalar>& attach_p,
                            const Vector3<Scalar>& attach_v, const CableParams<Scalar>& c) {
  const Vector3<Scalar> d = attach_p - quad.p;
  const Scalar dist = d.norm();
  if (dist < Scalar(1e-9)) throw DegenerateGeometry("cable endpoints coincide");
  if (dist <= c.rest_length) return Vector3<Scalar>::Zero();
  const Vector3<Scalar> n = d / dist;
  const Scalar rate = n.dot(attach_v - quad.v);
  const Scalar magnitude = std::max(Scalar(0), c.stiffness * (dist - c.rest_length) + c.damping * rate);
  return magnitude * n;
}

// ---------------------------------------------------------------------------
// Equations of motion

/// Pipe dynamics; the cable forces -t1, -t2 act at the attachment points
/// selected by `layout`. For kQuad1AtPlusEnd the moment reduces to
/// l0 * hat(e1) * R0^T (t2 - t1).
template <typename Scalar>
BodyDerivative<Scalar> payload_derivative(const RigidBodyState<Scalar>& payload, const Vector3<Scalar>& t1,
                                          const Vector3<Scalar>& t2, const BodyParams<Scalar>& params,
                                          CableLayout layout) {
  const auto r = attachment_offsets(params.length, layout);
  const Matrix3<Scalar>& R = payload.R;
  const Vector3<Scalar>& w = payload.omega;
  const Vector3<Scalar> moment = r[0].cross(R.transpose() * -t1) + r[1].cross(R.transpose() * -t2);

  BodyDerivative<Scalar> d;
  d.p_dot = payload.v;
  d.v_dot = kGravity<Scalar> * e3<Scalar>() - (t1 + t2) / params.mass;
  d.R_dot = R * hat(w);
  d.omega_dot = params.inertia.inverse() * (-w.cross(params.inertia * w) + moment);
  return d;
}

template <typename Scalar>
BodyDerivative<Scalar> quad_derivative(const RigidBodyState<Scalar>& quad, Scalar thrust_cmd,
                                       Scalar thrust_uncertainty, const Vector3<Scalar>& tension,
                                       const Vector3<Scalar>& torque, const BodyParams<Scalar>& params) {
  const Scalar thrust = thrust_cmd + thrust_uncertainty;
  if (thrust < Scalar(0)) throw std::invalid_argument("actual thrust f_c + df must be non-negative");
  const Matrix3<Scalar>& R = quad.R;
  const Vector3<Scalar>& w = quad.omega;

  BodyDerivative<Scalar> d;
  d.p_dot = quad.v;
  d.v_dot = kGravity<Scalar> * e3<Scalar>() - (thrust / params.mass) * R.col(2) + tension / params.mass;
  d.R_dot = R * hat(w);
  d.omega_dot = params.inertia.inverse() * (-w.cross(params.inertia * w) + torque);
  return d;
}

/// Auxiliary-state rate of the lumped-disturbance observer.
template <typename Scalar>
Vector3<Scalar> observer_rate(const Vector3<Scalar>& z, const Vector3<Scalar>& v, const Vector3<Scalar>& u,
                              Scalar gain) {
  return -gain * (z + gain * v + kGravity<Scalar> * e3<Scalar>() + u);
}

/// Acceleration command realised by thrust f_c along the current attitude.
template <typename Scalar>
Vector3<Scalar> realized_acceleration(const Matrix3<Scalar>& R, Scalar thrust_cmd, Scalar mass) {
  return -(thrust_cmd / mass) * R.col(2);
}

template <typename Scalar>
SystemDerivative<Scalar> system_derivative(const SystemState<Scalar>& s, const ActuationInput<Scalar>& u,
                                           const SystemParams<Scalar>& params) {
  const Scalar l0 = params.payload.length;
  const auto [a1, a2] = attachment_points(s.payload, l0, params.layout);
  const auto [va1, va2] = attachment_velocities(s.payload, l0, params.layout);

  SystemDerivative<Scalar> d;
  d.tension[0] = cable_force(s.quad[0], a1, va1, params.cable(0));
  d.tension[1] = cable_force(s.quad[1], a2, va2, params.cable(1));
  d.payload = payload_derivative(s.payload, d.tension[0], d.tension[1], params.payload, params.layout);
  for (int i = 0; i < 2; ++i) {
    d.quad[i] = quad_derivative(s.quad[i], u.thrust_cmd[i], u.thrust_uncertainty[i], d.tension[i], u.torque[i],
                                params.quad[i]);
    const Vector3<Scalar> ui = realized_acceleration(s.quad[i].R, u.thrust_cmd[i], params.quad[i].mass);
    d.z_dot[i] = observer_rate(s.z[i], s.quad[i].v, ui, params.observer_gain);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Flat packing for the integrator

namespace detail {

template <typename Scalar, typename Vec>
void put_body(Vec& x, int offset, const Vector3<Scalar>& a, const Vector3<Scalar>& b, const Matrix3<Scalar>& m,
              const Vector3<Scalar>& c) {
  x.template segment<3>(offset) = a;
  x.template segment<3>(offset + 3) = b;
  x.template segment<9>(offset + 6) = m.reshaped();
  x.template segment<3>(offset + 15) = c;
}

template <typename Scalar, typename Vec>
RigidBodyState<Scalar> get_body(const Vec& x, int offset) {
  RigidBodyState<Scalar> b;
  b.p = x.template segment<3>(offset);
  b.v = x.template segment<3>(offset + 3);
  b.R = x.template segment<9>(offset + 6).reshaped(3, 3);
  b.omega = x.template segment<3>(offset + 15);
  return b;
}

}  // namespace detail

template <typename Scalar>
SystemVector<Scalar> pack(const SystemState<Scalar>& s) {
  SystemVector<Scalar> x;
  detail::put_body<Scalar>(x, 0, s.payload.p, s.payload.v, s.payload.R, s.payload.omega);
  for (int i = 0; i < 2; ++i) {
    const auto& q = s.quad[i];
    detail::put_body<Scalar>(x, kBodyStateSize * (i + 1), q.p, q.v, q.R, q.omega);
    x.template segment<3>(3 * kBodyStateSize + 3 * i) = s.z[i];
  }
  return x;
}

template <typename Scalar>
SystemVector<Scalar> pack(const SystemDerivative<Scalar>& d) {
  SystemVector<Scalar> x;
  detail::put_body<Scalar>(x, 0, d.payload.p_dot, d.payload.v_dot, d.payload.R_dot, d.payload.omega_dot);
  for (int i = 0; i < 2; ++i) {
    const auto& q = d.quad[i];
    detail::put_body<Scalar>(x, kBodyStateSize * (i + 1), q.p_dot, q.v_dot, q.R_dot, q.omega_dot);
    x.template segment<3>(3 * kBodyStateSize + 3 * i) = d.z_dot[i];
  }
  return x;
}

template <typename Scalar>
SystemState<Scalar> unpack(const SystemVector<Scalar>& x) {
  SystemState<Scalar> s;
  s.payload = detail::get_body<Scalar>(x, 0);
  for (int i = 0; i < 2; ++i) {
    s.quad[i] = detail::get_body<Scalar>(x, kBodyStateSize * (i + 1));
    s.z[i] = x.template segment<3>(3 * kBodyStateSize + 3 * i);
  }
  return s;
}

/// Classical RK4 over the full state with the actuation held. Rotations are
/// re-orthonormalized once the step is complete.
template <typename Scalar>
SystemState<Scalar> rk4_step(const SystemState<Scalar>& s, const ActuationInput<Scalar>& u,
                             const SystemParams<Scalar>& params, Scalar dt) {
  if (!(dt > Scalar(0))) throw std::invalid_argument("dt must be positive");
  const auto rate = [&](const SystemVector<Scalar>& x) -> SystemVector<Scalar> {
    return pack(system_derivative(unpack(x), u, params));
  };
  const SystemVector<Scalar> next = rk4(rate, pack(s), dt);
  if (!next.allFinite()) throw NonFiniteState();
  SystemState<Scalar> out = unpack(next);
  out.payload.R = orthonormalize(out.payload.R);
  for (auto& q : out.quad) q.R = orthonormalize(q.R);
  return out;
}

/// Kinetic + gravitational + cable elastic energy (NED: potential is -m g z).
template <typename Scalar>
Scalar mechanical_energy(const SystemState<Scalar>& s, const SystemParams<Scalar>& params) {
  const auto body_energy = [](const RigidBodyState<Scalar>& b, const BodyParams<Scalar>& bp) {
    return Scalar(0.5) * bp.mass * b.v.squaredNorm() + Scalar(0.5) * b.omega.dot(bp.inertia * b.omega) -
           bp.mass * kGravity<Scalar> * b.p.z();
  };
  Scalar e = body_energy(s.payload, params.payload);
  const auto [a1, a2] = attachment_points(s.payload, params.payload.length, params.layout);
  const std::array<Vector3<Scalar>, 2> attach{a1, a2};
  for (int i = 0; i < 2; ++i) {
    e += body_energy(s.quad[i], params.quad[i]);
    const Scalar stretch = (attach[i] - s.quad[i].p).norm() - params.quad[i].length;
    if (stretch > 0) e += Scalar(0.5) * params.cable_stiffness * stretch * stretch;
  }
  return e;
}

}  // namespace cotrans
