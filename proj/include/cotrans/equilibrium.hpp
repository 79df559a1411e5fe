#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace cotrans {

/// Planar four-bar abstraction of quad 1 - cable 1 - pipe - cable 2 - quad 2
/// at static equilibrium in the vertical XZ plane.
///
/// Conventions: quadrotor 1 hangs from the pipe's minus end, the pipe's body
/// x-axis points toward cable 2, theta0 > 0 raises the cable-2 end, and
/// alpha/beta are the cable angles from the vertical. `s` is the horizontal
/// distance between the two quadrotors.
struct Geometry {
  double l0{1.0};
  double l1{0.8};
  double l2{0.4};
  double s{2.5};
  double m0{0.44};

  /// Throws ValidationError unless 2 l0 < s < 2 l0 + l1 + l2 and all lengths
  /// and the mass are positive.
  void validate() const;
};

struct EquilibriumPoint {
  double theta0{0};
  double t0{0};  ///< internal force along the pipe, N
  double k{0};   ///< m0 g / t0
  double alpha{0};
  double beta{0};
  double g1{0};
  double g2{0};
  double residual{0};  ///< constraint residual at the solution, m
};

struct SectorBounds {
  double sigma_lo{0};
  double sigma_hi{0};
  double theta_star{0};
  double kappa{0};
  double k_lo{0};
  double t0_max{0};
};

/// Value and slope of the tension-imbalance map at one pipe angle: value is
/// t0 sin(theta0); slope is d sigma / d x with sigma(x) = -t0 sin(theta0)
/// and x the vertical position error of quadrotor 2 (NED).
struct SigmaSample {
  double value{0};
  double slope{0};
};

/// Internal force and cable angles at pipe angle theta0. Bisection on k over
/// a log-spaced bracket scan; throws NoSolution when the scan finds no sign
/// change.
EquilibriumPoint solve_internal_force(const Geometry& geo, double theta0);

/// Residual of l1 cos(th)/g1 + l2 cos(th)/g2 + 2 l0 cos(th) - s at (theta0, k).
double constraint_residual(const Geometry& geo, double theta0, double k);

/// Cable tensions on the two quadrotors at equilibrium.
std::pair<Eigen::Vector3d, Eigen::Vector3d> equilibrium_cable_forces(const EquilibriumPoint& pt, double m0);

/// Height (up positive) of quadrotor 2 given the height of quadrotor 1.
double quad2_height(const Geometry& geo, double theta0, double h1);

/// Closed-form d k / d theta0 along the equilibrium manifold.
double dk_dtheta(const Geometry& geo, const EquilibriumPoint& pt);

/// Closed-form d h2 / d theta0; positive on the feasible interval.
double quad2_height_slope(const Geometry& geo, const EquilibriumPoint& pt);

SigmaSample sigma_map(const Geometry& geo, double theta0);

/// Constant sector bounds on the sigma slope for |theta0| <= theta_star and
/// cable angles <= kappa. Throws DegenerateBound when the lower bound on k
/// does not exist for this geometry.
SectorBounds sector_bounds(const Geometry& geo, double theta_star, double kappa);

enum class Proposition1Verdict {
  kZeroInternalForce,  ///< t1 = t2: any pipe attitude balances
  kParallelToGround,   ///< non-zero internal force with a level pipe
  kTilted,             ///< consistent decomposition, pipe not level
  kInconsistent,       ///< t1 - t2 is not along the pipe axis
};

struct Proposition1Result {
  Proposition1Verdict verdict{Proposition1Verdict::kInconsistent};
  double t0{0};
  double residual{0};
};

/// Decomposes t1 - t2 = t0 R0 e1 and classifies the configuration.
Proposition1Result check_proposition1(const Eigen::Vector3d& t1, const Eigen::Vector3d& t2,
                                      const Eigen::Matrix3d& R0, double tol = 1e-6);

const char* to_string(Proposition1Verdict v);

struct SweepPoint {
  EquilibriumPoint point;
  double h2{0};     ///< height of quadrotor 2 relative to quadrotor 1
  double p2z_err{0};  ///< vertical position error of quadrotor 2 w.r.t. the level pose (NED)
  double sigma{0};  ///< -t0 sin(theta0)
  double slope{0};  ///< closed-form d sigma / d p2z_err
};

/// Evenly spaced sweep of theta0 over [-theta_max, theta_max].
std::vector<SweepPoint> sigma_sweep(const Geometry& geo, double theta_max, int points);

}  // namespace cotrans
