#pragma once

namespace cotrans {

/// One classical Runge-Kutta step of x' = f(x) for any vector-space type that
/// supports `x + h * dx`.
template <typename Vector, typename Rate, typename Scalar>
Vector rk4(const Rate& f, const Vector& x, Scalar h) {
  const Vector k1 = f(x);
  const Vector k2 = f(Vector(x + (h / 2) * k1));
  const Vector k3 = f(Vector(x + (h / 2) * k2));
  const Vector k4 = f(Vector(x + h * k3));
  return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace cotrans
