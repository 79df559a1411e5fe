#pragma once

// Seeded generators and independent oracles shared by the unit tests. The
// oracles deliberately avoid calling into the library code they check.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Core>

namespace testing_support {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr double kG = 9.81;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Eigen::Vector3d vec(double scale = 1.0) {
    return Eigen::Vector3d(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale));
  }

 private:
  std::mt19937_64 rng_;
};

/// Elementary rotations written out entry by entry.
inline Eigen::Matrix3d rot_x(double a) {
  Eigen::Matrix3d m;
  m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return m;
}

inline Eigen::Matrix3d rot_y(double a) {
  Eigen::Matrix3d m;
  m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return m;
}

inline Eigen::Matrix3d rot_z(double a) {
  Eigen::Matrix3d m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

/// Thrust axis R e3 for R = Ry(pitch) Rx(roll), expanded by hand.
inline Eigen::Vector3d body_z(double roll, double pitch) {
  return {std::cos(roll) * std::sin(pitch), -std::sin(roll), std::cos(roll) * std::cos(pitch)};
}

/// Quasi-static forward model: the lumped disturbance m_i d_i = -df_i R_i e3 + t_i
/// with the payload balance t1 + t2 = m0 g e3 closed by the pipe internal force.
struct ForwardModel {
  double m0{0.44};
  double m[2]{0.87, 0.88};
  double pitch[2]{20 * kDeg, -20 * kDeg};
  double roll[2]{0, 0};
  double df[2]{-1.5, -3.0};
  double theta0{0};
  double t0{1.978};

  Eigen::Vector3d tension(int i) const {
    const double c = t0 * std::cos(theta0), s = t0 * std::sin(theta0), w = m0 * kG;
    return i == 0 ? Eigen::Vector3d(c / 2, 0, (-s + w) / 2) : Eigen::Vector3d(-c / 2, 0, (s + w) / 2);
  }

  Eigen::Vector3d d_hat(int i) const { return (-df[i] * body_z(roll[i], pitch[i]) + tension(i)) / m[i]; }

  double xi_z() const { return df[1] * body_z(roll[1], pitch[1]).z() - df[0] * body_z(roll[0], pitch[0]).z(); }
};

}  // namespace testing_support
