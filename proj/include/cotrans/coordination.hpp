#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "cotrans/dynamics.hpp"
#include "cotrans/observer.hpp"
#include "cotrans/so3.hpp"

namespace cotrans {

struct SectorBounds;

template <typename Scalar>
struct ControlGains {
  Scalar k1{4};
  Scalar k2{4};
  Scalar k3{5};
  Scalar k4{8};
  Scalar k_f{0.5};
  Scalar iota{5};
};

/// Leader reference and desired leader-minus-follower offset. The formation
/// is time-invariant.
template <typename Scalar>
struct ReferenceSet {
  Vector3<Scalar> p1d = Vector3<Scalar>::Zero();
  Vector3<Scalar> p1d_dot = Vector3<Scalar>::Zero();
  Vector3<Scalar> p12d = Vector3<Scalar>::Zero();

  Vector2<Scalar> p12d_xy() const { return p12d.template head<2>(); }
};

template <typename Scalar>
struct ControlOutput {
  std::array<Vector3<Scalar>, 2> u{Vector3<Scalar>::Zero(), Vector3<Scalar>::Zero()};
};

/// Rigid leader-follower formation with disturbance compensation. Quadrotor
/// 1 tracks p1d; quadrotor 2 holds p1 - p2 = p12d.
template <typename Scalar>
ControlOutput<Scalar> position_coordination(const RigidBodyState<Scalar>& s1, const RigidBodyState<Scalar>& s2,
                                            const ReferenceSet<Scalar>& refs, const Vector3<Scalar>& d1_hat,
                                            const Vector3<Scalar>& d2_hat, const ControlGains<Scalar>& g) {
  const Vector3<Scalar> formation_err = s1.p - s2.p - refs.p12d;
  const Vector3<Scalar> formation_rate = s1.v - s2.v;
  const Vector3<Scalar> formation = g.k1 * formation_err + g.k2 * formation_rate;
  const Vector3<Scalar> tracking = -g.k3 * (s1.p - refs.p1d) - g.k4 * (s1.v - refs.p1d_dot);
  const Vector3<Scalar> gravity = kGravity<Scalar> * e3<Scalar>();

  ControlOutput<Scalar> out;
  out.u[0] = -formation + tracking - gravity - d1_hat;
  out.u[1] = formation - gravity - d2_hat;
  return out;
}

/// Horizontal formation keeping plus vertical force consensus. Quadrotor 1
/// holds its altitude; quadrotor 2 has no altitude reference and moves
/// vertically until the estimated vertical tensions agree.
template <typename Scalar>
ControlOutput<Scalar> force_coordination(const RigidBodyState<Scalar>& s1, const RigidBodyState<Scalar>& s2,
                                         const ReferenceSet<Scalar>& refs, const Vector3<Scalar>& d1_hat,
                                         const Vector3<Scalar>& d2_hat, const EstimateBundle<Scalar>& est,
                                         const ControlGains<Scalar>& g) {
  ControlOutput<Scalar> out = position_coordination(s1, s2, refs, d1_hat, d2_hat, g);
  const Scalar grav = kGravity<Scalar>;
  out.u[0].z() = -g.k3 * (s1.p.z() - refs.p1d.z()) - g.k4 * s1.v.z() - grav - d1_hat.z();
  out.u[1].z() = -g.k4 * s2.v.z() - grav - d2_hat.z() + g.k_f * est.consensus_error();
  return out;
}

// ---------------------------------------------------------------------------
// Gain checks

using Matrix12d = Eigen::Matrix<double, 12, 12>;

/// Closed-loop error matrix of the rigid formation, state
/// (p1 error, p12 error, their rates).
Matrix12d formation_error_matrix(const ControlGains<double>& g);

/// Coefficients of the formation's characteristic quartic, highest power first.
std::array<double, 5> characteristic_polynomial(const ControlGains<double>& g);

struct GainReport {
  std::array<double, 5> coefficients{};
  std::vector<double> routh_column;
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part{0};
  bool routh_pass{false};
  bool eigen_pass{false};

  bool pass() const { return routh_pass && eigen_pass; }
};

GainReport validate_gains(const ControlGains<double>& g);

/// Throws UnstableGains when the report does not pass.
void require_stable(const GainReport& report);

struct ForceGainReport {
  double k4_lower_bound{0};
  double kf_upper_bound{0};
  bool k4_ok{false};
  bool kf_ok{false};

  double k4_margin(double k4) const { return k4 - k4_lower_bound; }
  double kf_margin(double k_f) const { return kf_upper_bound - k_f; }
  bool pass() const { return k4_ok && kf_ok; }
};

/// Sufficient conditions on (k4, k_f) for the force-consensus loop:
/// k4 > eps1 + t0_max / (4 gamma) and k_f < eps1 sigma_lo / (gamma sigma_hi^2).
ForceGainReport validate_force_gains(const ControlGains<double>& g, const SectorBounds& bounds, double t0_max,
                                     double eps1 = 1.0, double gamma = 1.0);

}  // namespace cotrans
