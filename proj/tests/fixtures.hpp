#pragma once

// Plant configurations shared by unit and acceptance tests.

#include <cmath>

#include "cotrans/dynamics.hpp"
#include "cotrans/equilibrium.hpp"
#include "cotrans/harness.hpp"

namespace testing_support {

struct Snapshot {
  cotrans::SystemState<double> state;
  cotrans::ActuationInput<double> input;
  cotrans::SystemParams<double> params;
};

/// Static equilibrium of the full plant at planar pipe angle theta0: cables
/// stretched by |t_i| / k, quadrotors tilted so thrust balances weight plus
/// tension, observer states at their fixed point. Uses the layout in which
/// the planar and plant angles agree.
inline Snapshot equilibrium_snapshot(double theta0) {
  using namespace cotrans;
  Snapshot snap;
  snap.params = ScenarioConfig::default_plant();
  snap.params.layout = CableLayout::kQuad1AtMinusEnd;
  const auto& P = snap.params;

  Geometry geo;
  geo.l0 = P.payload.length;
  geo.l1 = P.quad[0].length;
  geo.l2 = P.quad[1].length;
  geo.m0 = P.payload.mass;
  const EquilibriumPoint pt = solve_internal_force(geo, theta0);
  const auto [t1, t2] = equilibrium_cable_forces(pt, geo.m0);
  const std::array<Eigen::Vector3d, 2> t{t1, t2};

  auto& s = snap.state;
  s.payload.p.setZero();
  s.payload.R = euler_to_rotation(0.0, theta0);
  const auto [a1, a2] = attachment_points(s.payload, geo.l0, P.layout);
  const std::array<Eigen::Vector3d, 2> a{a1, a2};
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector3d n = t[i].normalized();
    s.quad[i].p = a[i] - n * (P.quad[i].length + t[i].norm() / P.cable_stiffness);
    const Eigen::Vector3d lift = P.quad[i].mass * kGravity<double> * e3<double>() + t[i];
    s.quad[i].R = euler_to_rotation(0.0, std::atan2(lift.x(), lift.z()));
    snap.input.thrust_cmd[i] = lift.norm();
    // The observer sits at its fixed point: z = d - iota v with d = t / m.
    s.z[i] = t[i] / P.quad[i].mass;
  }
  return snap;
}

}  // namespace testing_support
