#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "cotrans/errors.hpp"

namespace cotrans {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
inline constexpr Scalar kGravity = Scalar(9.81);

template <typename Scalar>
inline Vector3<Scalar> e1() { return Vector3<Scalar>::UnitX(); }
template <typename Scalar>
inline Vector3<Scalar> e2() { return Vector3<Scalar>::UnitY(); }
template <typename Scalar>
inline Vector3<Scalar> e3() { return Vector3<Scalar>::UnitZ(); }

/// Roll-pitch-yaw, applied as R = Rz(yaw) Ry(pitch) Rx(roll). Yaw is held at
/// zero everywhere in this library; it is kept as a field so conversions are
/// total.
template <typename Scalar>
struct EulerAngles {
  Scalar roll{0};
  Scalar pitch{0};
  Scalar yaw{0};
};

/// Skew-symmetric matrix with hat(w) * v == w.cross(v).
template <typename Derived>
Matrix3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& w) {
  using Scalar = typename Derived::Scalar;
  Matrix3<Scalar> m;
  m << Scalar(0), -w(2), w(1),
       w(2), Scalar(0), -w(0),
       -w(1), w(0), Scalar(0);
  return m;
}

template <typename Derived>
Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& m) {
  return {m(2, 1), m(0, 2), m(1, 0)};
}

template <typename Derived>
Vector2<typename Derived::Scalar> proj_xy(const Eigen::MatrixBase<Derived>& v) {
  return {v(0), v(1)};
}

template <typename Derived>
typename Derived::Scalar proj_z(const Eigen::MatrixBase<Derived>& v) {
  return v(2);
}

template <typename Scalar>
Matrix3<Scalar> euler_to_rotation(const EulerAngles<Scalar>& e) {
  using std::cos;
  using std::sin;
  const Scalar cr = cos(e.roll), sr = sin(e.roll);
  const Scalar cp = cos(e.pitch), sp = sin(e.pitch);
  const Scalar cy = cos(e.yaw), sy = sin(e.yaw);
  Matrix3<Scalar> r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp, cp * sr, cp * cr;
  return r;
}

template <typename Scalar>
Matrix3<Scalar> euler_to_rotation(Scalar roll, Scalar pitch) {
  return euler_to_rotation(EulerAngles<Scalar>{roll, pitch, Scalar(0)});
}

/// Inverse of euler_to_rotation. Throws GimbalLock when |pitch| reaches pi/2.
template <typename Derived>
EulerAngles<typename Derived::Scalar> rotation_to_euler(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::asin;
  using std::atan2;
  if (!(abs(r(2, 0)) < Scalar(1) - Scalar(1e-9))) throw GimbalLock();
  EulerAngles<Scalar> e;
  e.pitch = asin(-r(2, 0));
  e.roll = atan2(r(2, 1), r(2, 2));
  e.yaw = atan2(r(1, 0), r(0, 0));
  return e;
}

/// Gram-Schmidt on the columns, keeping the first column's direction.
template <typename Derived>
Matrix3<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  Vector3<Scalar> c0 = r.col(0).normalized();
  Vector3<Scalar> c1 = r.col(1) - c0.dot(r.col(1)) * c0;
  c1.normalize();
  Matrix3<Scalar> out;
  out.col(0) = c0;
  out.col(1) = c1;
  out.col(2) = c0.cross(c1);
  return out;
}

template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& r,
                 typename Derived::Scalar tol = typename Derived::Scalar(1e-9)) {
  using Scalar = typename Derived::Scalar;
  if (!r.allFinite()) return false;
  const Matrix3<Scalar> err = r.transpose() * r - Matrix3<Scalar>::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(r.determinant() - Scalar(1)) <= tol;
}

}  // namespace cotrans
