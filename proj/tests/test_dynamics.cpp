#include <doctest.h>

#include <limits>

#include "cotrans/dynamics.hpp"
#include "cotrans/errors.hpp"
#include "fixtures.hpp"
#include "support.hpp"
#include "swing.hpp"

using namespace cotrans;
using namespace testing_support;
using Vec3 = Eigen::Vector3d;
const Vec3 kZero = Vec3::Zero();

namespace {

SystemParams<double> table1_plant() { return ScenarioConfig::default_plant(); }

double translational_rate_norm(const SystemDerivative<double>& d) {
  return std::max({d.payload.v_dot.norm(), d.quad[0].v_dot.norm(), d.quad[1].v_dot.norm()});
}

}  // namespace

TEST_CASE("attachment points") {
  RigidBodyState<double> payload;
  auto [a1, a2] = attachment_points(payload, 1.0, CableLayout::kQuad1AtMinusEnd);
  CHECK(a1 == Vec3(-1, 0, 0));
  CHECK(a2 == Vec3(1, 0, 0));

  payload.p = Vec3(0, 0, -1);
  std::tie(a1, a2) = attachment_points(payload, 1.0, CableLayout::kQuad1AtMinusEnd);
  CHECK(a1 == Vec3(-1, 0, -1));
  CHECK(a2 == Vec3(1, 0, -1));

  payload.p.setZero();
  payload.R = rot_y(-10 * kDeg);
  std::tie(a1, a2) = attachment_points(payload, 1.0, CableLayout::kQuad1AtMinusEnd);
  CHECK((a2 - Vec3(std::cos(10 * kDeg), 0, std::sin(10 * kDeg))).norm() < 1e-15);
  CHECK(a2.x() == doctest::Approx(0.985).epsilon(1e-3));
  CHECK(a2.z() == doctest::Approx(0.174).epsilon(2e-3));

  // The plus-end layout swaps the ends.
  const auto [b1, b2] = attachment_points(payload, 1.0, CableLayout::kQuad1AtPlusEnd);
  CHECK(b1 == a2);
  CHECK(b2 == a1);
}

TEST_CASE("cable force") {
  const CableParams<double> c{5000, 50, 0.8};
  RigidBodyState<double> quad;

  SUBCASE("slack cable carries nothing") {
    quad.p = Vec3(0, 0, -0.5);
    CHECK(cable_force(quad, kZero, kZero, c).isZero(0));
  }
  SUBCASE("taut vertical cable pulls toward the attachment") {
    const double delta = 1e-3;
    quad.p = Vec3(0, 0, -(0.8 + delta));
    const Vec3 t = cable_force(quad, kZero, kZero, c);
    CHECK(t.x() == 0);
    CHECK(t.y() == 0);
    CHECK(t.z() == doctest::Approx(5000 * delta).epsilon(1e-9));
  }
  SUBCASE("damping only while taut and never pushes") {
    quad.p = Vec3(0, 0, -(0.8 + 1e-4));
    quad.v = Vec3(0, 0, 1.0);  // moving toward the attachment: stretch shrinking
    CHECK(cable_force(quad, kZero, kZero, c).isZero(0));
    quad.v = Vec3(0, 0, -0.01);
    CHECK(cable_force(quad, kZero, kZero, c).z() == doctest::Approx(0.5 + 0.5));
  }
  SUBCASE("coincident endpoints") {
    CHECK_THROWS_AS(cable_force(quad, kZero, kZero, c), DegenerateGeometry);
  }
}

TEST_CASE("vertical-cable hover stretches each cable by m0 g / (2 k)") {
  auto P = table1_plant();
  P.layout = CableLayout::kQuad1AtMinusEnd;
  const double stretch = P.payload.mass * kG / (2 * P.cable_stiffness);
  CHECK(stretch == doctest::Approx(4.3164e-4).epsilon(1e-9));

  SystemState<double> s;
  const auto [a1, a2] = attachment_points(s.payload, P.payload.length, P.layout);
  s.quad[0].p = a1 - (P.quad[0].length + stretch) * e3<double>();
  s.quad[1].p = a2 - (P.quad[1].length + stretch) * e3<double>();
  ActuationInput<double> u;
  for (int i = 0; i < 2; ++i) u.thrust_cmd[i] = P.quad[i].mass * kG + P.payload.mass * kG / 2;
  const auto d = system_derivative(s, u, P);
  CHECK(d.tension[0].z() == doctest::Approx(P.payload.mass * kG / 2).epsilon(1e-12));
  CHECK(translational_rate_norm(d) < 1e-12);
  CHECK(d.payload.omega_dot.norm() < 1e-10);
}

TEST_CASE("payload derivative examples") {
  const auto P = table1_plant();
  RigidBodyState<double> payload;

  const auto free = payload_derivative(payload, kZero, kZero, P.payload, P.layout);
  CHECK(free.v_dot == Vec3(0, 0, 9.81));

  const Vec3 half(0, 0, 2.1582);
  CHECK(payload_derivative(payload, half, half, P.payload, P.layout).v_dot.norm() < 1e-6);

  // Moment l0 hat(e1) R0^T (t2 - t1) with t2 - t1 = e3.
  const auto spun = payload_derivative(payload, kZero, Vec3(0, 0, 1), P.payload, CableLayout::kQuad1AtPlusEnd);
  CHECK((spun.omega_dot - Vec3(0, -1 / 0.15, 0)).norm() < 1e-12);
  CHECK(spun.omega_dot.y() == doctest::Approx(-6.667).epsilon(1e-3));
  const auto mirrored =
      payload_derivative(payload, kZero, Vec3(0, 0, 1), P.payload, CableLayout::kQuad1AtMinusEnd);
  CHECK((mirrored.omega_dot + spun.omega_dot).norm() < 1e-12);
}

TEST_CASE("payload moment matches the closed form for the plus-end layout") {
  const auto P = table1_plant();
  Gen gen(21);
  for (int n = 0; n < 200; ++n) {
    RigidBodyState<double> payload;
    payload.R = rot_z(gen.uniform(-3, 3)) * rot_y(gen.uniform(-1, 1)) * rot_x(gen.uniform(-3, 3));
    const Vec3 t1 = gen.vec(5), t2 = gen.vec(5);
    const auto d = payload_derivative(payload, t1, t2, P.payload, CableLayout::kQuad1AtPlusEnd);
    const Vec3 moment = P.payload.length * Vec3::UnitX().cross(payload.R.transpose() * (t2 - t1));
    const Vec3 expected = P.payload.inertia.diagonal().cwiseInverse().cwiseProduct(moment);
    CHECK((d.omega_dot - expected).norm() < 1e-10 * (1 + expected.norm()));
  }
}

TEST_CASE("quad derivative examples") {
  const auto P = table1_plant();
  BodyParams<double> q = P.quad[0];
  RigidBodyState<double> quad;

  CHECK(quad_derivative(quad, q.mass * kG, 0.0, kZero, kZero, q).v_dot.norm() < 1e-14);

  const auto d = quad_derivative(quad, 8.535, -0.2 * 8.535, kZero, kZero, q);
  CHECK(d.v_dot.x() == 0);
  CHECK(d.v_dot.z() == doctest::Approx(9.81 - 6.828 / 0.87).epsilon(1e-12));
  CHECK(d.v_dot.z() == doctest::Approx(1.962).epsilon(1e-3));

  quad.omega = Vec3(0, 0, 1);
  CHECK(quad_derivative(quad, 0.0, 0.0, kZero, kZero, q).omega_dot.norm() < 1e-15);

  CHECK_THROWS_AS(quad_derivative(quad, 1.0, -1.5, kZero, kZero, q), std::invalid_argument);
}

TEST_CASE("Newton's third law and unilateral tension on random snapshots") {
  const auto P = table1_plant();
  Gen gen(22);
  for (int n = 0; n < 300; ++n) {
    SystemState<double> s;
    s.payload.p = gen.vec(0.1);
    s.payload.v = gen.vec(0.5);
    s.payload.omega = gen.vec(0.5);
    s.payload.R = rot_y(gen.uniform(-0.5, 0.5)) * rot_x(gen.uniform(-0.2, 0.2));
    const auto [a1, a2] = attachment_points(s.payload, P.payload.length, P.layout);
    s.quad[0].p = a1 + Vec3(0.3, 0, -0.75) + gen.vec(0.05);
    s.quad[1].p = a2 + Vec3(-0.15, 0, -0.37) + gen.vec(0.05);
    s.quad[0].v = gen.vec(0.5);
    s.quad[1].v = gen.vec(0.5);
    ActuationInput<double> u;
    u.thrust_cmd = {gen.uniform(0, 20), gen.uniform(0, 20)};

    const auto d = system_derivative(s, u, P);
    for (int i = 0; i < 2; ++i) {
      const Vec3 attach = i == 0 ? a1 : a2;
      // Tension points from quad to attachment and is never compressive.
      CHECK(d.tension[i].dot(attach - s.quad[i].p) >= 0);
      CHECK(d.tension[i].cross(attach - s.quad[i].p).norm() <= 1e-9 * (1 + d.tension[i].norm()));
    }
    const Vec3 payload_force = P.payload.mass * (d.payload.v_dot - kG * e3<double>());
    CHECK((payload_force + d.tension[0] + d.tension[1]).norm() < 1e-9 * (1 + d.tension[0].norm()));
  }
}

TEST_CASE("system derivative at solved static equilibria") {
  for (const double deg : {-20.0, -10.0, 0.0, 10.0, 20.0}) {
    CAPTURE(deg);
    const Snapshot snap = equilibrium_snapshot(deg * kDeg);
    const auto d = system_derivative(snap.state, snap.input, snap.params);
    CHECK(translational_rate_norm(d) < 1e-4);
    CHECK(d.payload.omega_dot.norm() < 1e-4);
    CHECK(d.tension[0].z() + d.tension[1].z() == doctest::Approx(snap.params.payload.mass * kG).epsilon(1e-9));
  }
}

TEST_CASE("zero thrust with slack cables is free fall") {
  const auto P = table1_plant();
  SystemState<double> s;
  const auto [a1, a2] = attachment_points(s.payload, P.payload.length, P.layout);
  s.quad[0].p = a1 - Vec3(0, 0, 0.5);
  s.quad[1].p = a2 - Vec3(0, 0, 0.2);
  const auto d = system_derivative(s, ActuationInput<double>{}, P);
  for (const auto* b : {&d.payload, &d.quad[0], &d.quad[1]}) CHECK(b->v_dot == Vec3(0, 0, 9.81));
}

TEST_CASE("symmetric hover produces no payload spin") {
  auto P = table1_plant();
  P.quad[1] = P.quad[0];
  SystemState<double> s;
  const auto [a1, a2] = attachment_points(s.payload, P.payload.length, P.layout);
  const double stretch = P.payload.mass * kG / (2 * P.cable_stiffness);
  s.quad[0].p = a1 - (P.quad[0].length + stretch) * e3<double>();
  s.quad[1].p = a2 - (P.quad[1].length + stretch) * e3<double>();
  ActuationInput<double> u;
  u.thrust_cmd = {10.0, 10.0};
  CHECK(system_derivative(s, u, P).payload.omega_dot.norm() < 1e-12);
}

TEST_CASE("rk4 step") {
  SUBCASE("equilibrium is a fixed point") {
    const Snapshot snap = equilibrium_snapshot(0.0);
    const auto next = rk4_step(snap.state, snap.input, snap.params, 1e-3);
    CHECK((pack(next) - pack(snap.state)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("free fall for one second") {
    const auto P = table1_plant();
    SystemState<double> s;
    const auto [a1, a2] = attachment_points(s.payload, P.payload.length, P.layout);
    s.quad[0].p = a1 - Vec3(0, 0, 0.5);
    s.quad[1].p = a2 - Vec3(0, 0, 0.2);
    const SystemState<double> start = s;
    for (int k = 0; k < 1000; ++k) s = rk4_step(s, ActuationInput<double>{}, P, 1e-3);
    CHECK(std::abs(s.payload.v.z() - 9.81) < 1e-9);
    CHECK(std::abs(s.payload.p.z() - start.payload.p.z() - 4.905) < 1e-6);
    CHECK(std::abs(s.quad[1].p.z() - start.quad[1].p.z() - 4.905) < 1e-6);
  }
  SUBCASE("rotations stay on SO(3)") {
    Snapshot snap = equilibrium_snapshot(0.1);
    snap.state.payload.omega = Vec3(0.3, -0.5, 0.2);
    snap.state.quad[0].omega = Vec3(2, 1, -1);
    auto s = snap.state;
    for (int k = 0; k < 500; ++k) s = rk4_step(s, snap.input, snap.params, 1e-3);
    CHECK(is_rotation(s.payload.R, 1e-12));
    CHECK(is_rotation(s.quad[0].R, 1e-12));
  }
  SUBCASE("non-finite results are reported") {
    Snapshot snap = equilibrium_snapshot(0.0);
    snap.state.quad[0].v.x() = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(rk4_step(snap.state, snap.input, snap.params, 1e-3), NonFiniteState);
    CHECK_THROWS_AS(rk4_step(snap.state, snap.input, snap.params, 0.0), std::invalid_argument);
  }
}

TEST_CASE("pack and unpack are inverse") {
  Gen gen(23);
  SystemState<double> s;
  s.payload.p = gen.vec();
  s.payload.R = rot_y(0.3) * rot_x(-0.2);
  s.quad[1].omega = gen.vec();
  s.z[0] = gen.vec();
  s.z[1] = gen.vec();
  const auto back = unpack(pack(s));
  CHECK(pack(back) == pack(s));
  CHECK(back.payload.R == s.payload.R);
  CHECK(back.z[1] == s.z[1]);
}

TEST_CASE("energy is conserved without thrust or damping") {
  Snapshot snap = equilibrium_snapshot(0.0);
  snap.params.cable_damping = 0;
  snap.input = ActuationInput<double>{};
  auto s = snap.state;
  s.quad[0].v = Vec3(0.2, 0.4, -0.3);
  s.quad[1].v = Vec3(-0.1, -0.3, 0.2);
  s.payload.omega = Vec3(0, 0.3, 0.5);
  const double e0 = mechanical_energy(s, snap.params);
  double worst = 0;
  for (int k = 0; k < 5000; ++k) {
    s = rk4_step(s, snap.input, snap.params, 1e-3);
    worst = std::max(worst, std::abs(mechanical_energy(s, snap.params) - e0));
  }
  MESSAGE("initial energy " << e0 << " J, worst drift " << worst << " J");
  CHECK(worst < 1e-3 * std::abs(e0));
}

TEST_CASE("RK4 global order on the swing scenario") {
  const OrderEstimate est = rk4_order({2e-3, 1e-3, 5e-4});
  MESSAGE("errors " << est.errors[0] << " " << est.errors[1] << " " << est.errors[2] << ", slope " << est.slope);
  CHECK(est.slope >= 3.6);
  CHECK(est.slope <= 4.2);
  CHECK(est.errors[0] / est.errors[1] == doctest::Approx(16).epsilon(0.25));
}
