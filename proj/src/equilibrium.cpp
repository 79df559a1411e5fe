#include "cotrans/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cotrans/errors.hpp"
#include "cotrans/so3.hpp"

namespace cotrans {

namespace {

constexpr double kG = kGravity<double>;

struct Radicals {
  double g1;
  double g2;
};

Radicals radicals(double theta0, double k) {
  const double sn = std::sin(theta0);
  return {std::sqrt(k * k - 2 * k * sn + 1), std::sqrt(k * k + 2 * k * sn + 1)};
}

}  // namespace

void Geometry::validate() const {
  if (!(l0 > 0 && l1 > 0 && l2 > 0)) throw ValidationError("cable and pipe lengths must be positive");
  if (!(m0 > 0)) throw ValidationError("payload mass must be positive");
  if (!(s > 2 * l0))
    throw ValidationError("horizontal separation must exceed the pipe length (positive internal force)");
  if (!(s < 2 * l0 + l1 + l2)) throw ValidationError("horizontal separation is beyond reach of the cables");
}

double constraint_residual(const Geometry& geo, double theta0, double k) {
  const auto [g1, g2] = radicals(theta0, k);
  const double c = std::cos(theta0);
  return geo.l1 * c / g1 + geo.l2 * c / g2 + 2 * geo.l0 * c - geo.s;
}

EquilibriumPoint solve_internal_force(const Geometry& geo, double theta0) {
  geo.validate();
  if (!(std::abs(theta0) < M_PI / 2)) throw NoSolution("pipe angle must lie in (-pi/2, pi/2)");

  // Both cable angles stay below pi/2 only for k > |sin theta0|.
  const double k_floor = std::max(1e-6, std::abs(std::sin(theta0)) * (1 + 1e-12) + 1e-12);
  const double k_ceil = 1e6;
  constexpr int kScan = 400;

  const double log_lo = std::log(k_floor), log_hi = std::log(k_ceil);
  double prev_k = k_floor;
  double prev_r = constraint_residual(geo, theta0, prev_k);
  int sign_changes = 0;
  double lo = 0, hi = 0;
  for (int i = 1; i <= kScan; ++i) {
    const double k = std::exp(log_lo + (log_hi - log_lo) * i / kScan);
    const double r = constraint_residual(geo, theta0, k);
    if ((prev_r > 0) != (r > 0)) {
      ++sign_changes;
      lo = prev_k;
      hi = k;
    }
    prev_k = k;
    prev_r = r;
  }
  if (sign_changes == 0)
    throw NoSolution("no equilibrium internal force for theta0 = " + std::to_string(theta0));
  if (sign_changes > 1) throw std::logic_error("equilibrium constraint is not monotone in k");

  // The residual decreases in k.
  double k = 0.5 * (lo + hi);
  double r = constraint_residual(geo, theta0, k);
  for (int it = 0; it < 200 && std::abs(r) > 1e-13; ++it) {
    if (r > 0)
      lo = k;
    else
      hi = k;
    k = 0.5 * (lo + hi);
    r = constraint_residual(geo, theta0, k);
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * k) break;
  }

  EquilibriumPoint pt;
  pt.theta0 = theta0;
  pt.k = k;
  pt.t0 = geo.m0 * kG / k;
  const auto [g1, g2] = radicals(theta0, k);
  pt.g1 = g1;
  pt.g2 = g2;
  const double sn = std::sin(theta0), c = std::cos(theta0);
  pt.alpha = std::atan2(c / g1, (k - sn) / g1);
  pt.beta = std::atan2(c / g2, (k + sn) / g2);
  pt.residual = r;
  return pt;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> equilibrium_cable_forces(const EquilibriumPoint& pt, double m0) {
  const double tc = pt.t0 * std::cos(pt.theta0);
  const double ts = pt.t0 * std::sin(pt.theta0);
  const double w = m0 * kG;
  return {Eigen::Vector3d(tc / 2, 0, (-ts + w) / 2), Eigen::Vector3d(-tc / 2, 0, (ts + w) / 2)};
}

double quad2_height(const Geometry& geo, double theta0, double h1) {
  const EquilibriumPoint pt = solve_internal_force(geo, theta0);
  const double sn = std::sin(theta0);
  return geo.l2 * (pt.k + sn) / pt.g2 + 2 * geo.l0 * sn - geo.l1 * (pt.k - sn) / pt.g1 + h1;
}

double dk_dtheta(const Geometry& geo, const EquilibriumPoint& pt) {
  const double sn = std::sin(pt.theta0), c = std::cos(pt.theta0), k = pt.k;
  const double a1 = geo.l1 / std::pow(pt.g1, 3), a2 = geo.l2 / std::pow(pt.g2, 3);
  const double num = a1 * (k - sn) * (k * sn - 1) + a2 * (k + sn) * (k * sn + 1) + 2 * geo.l0 * sn;
  const double den = (a1 * (k - sn) + a2 * (k + sn)) * c;
  return -num / den;
}

double quad2_height_slope(const Geometry& geo, const EquilibriumPoint& pt) {
  const double sn = std::sin(pt.theta0), c = std::cos(pt.theta0), k = pt.k;
  const double a1 = geo.l1 / std::pow(pt.g1, 3), a2 = geo.l2 / std::pow(pt.g2, 3);
  const double coupling = 4 * geo.l1 * geo.l2 / std::pow(pt.g1 * pt.g2, 3) + 2 * geo.l0 * (a1 + a2);
  return k * c * coupling / (a1 * (k - sn) + a2 * (k + sn));
}

SigmaSample sigma_map(const Geometry& geo, double theta0) {
  const EquilibriumPoint pt = solve_internal_force(geo, theta0);
  const double sn = std::sin(theta0), c = std::cos(theta0), k = pt.k;
  const double a1 = geo.l1 / std::pow(pt.g1, 3), a2 = geo.l2 / std::pow(pt.g2, 3);
  const double num = a1 * (k - sn) * (k - sn) + a2 * (k + sn) * (k + sn) + 2 * geo.l0 * sn * sn;
  const double den = 4 * geo.l1 * geo.l2 / std::pow(pt.g1 * pt.g2, 3) + 2 * geo.l0 * (a1 + a2);
  SigmaSample out;
  out.value = pt.t0 * sn;
  out.slope = geo.m0 * kG / (k * k * k * c * c) * num / den;
  return out;
}

SectorBounds sector_bounds(const Geometry& geo, double theta_star, double kappa) {
  geo.validate();
  if (!(theta_star > 0 && theta_star < M_PI / 2)) throw ValidationError("theta_star must lie in (0, pi/2)");
  if (!(kappa > 0 && kappa < M_PI / 2)) throw ValidationError("kappa must lie in (0, pi/2)");

  const double w = geo.m0 * kG;
  const double cs = std::cos(theta_star);
  const double span = geo.s / cs - 2 * geo.l0;
  const double radicand = 4 * geo.l1 * geo.l2 / (span * span) - 1;
  if (!(radicand > 0)) throw DegenerateBound("lower bound on k is vacuous for this geometry and theta_star");

  SectorBounds b;
  b.theta_star = theta_star;
  b.kappa = kappa;
  b.k_lo = std::sqrt(radicand);
  b.t0_max = w / b.k_lo;
  const double ck = std::cos(kappa);
  b.sigma_lo = w * (geo.s - 2 * geo.l0) * ck * ck /
               (4 * geo.l1 * geo.l2 / (cs * cs * cs) + 2 * geo.l0 * geo.l1 + 2 * geo.l0 * geo.l2);
  const double inv = 1 + 1 / b.k_lo;
  b.sigma_hi = w / b.k_lo * inv * inv * geo.s / (2 * geo.l0 * cs * cs * (geo.s - 2 * geo.l0));
  return b;
}

Proposition1Result check_proposition1(const Eigen::Vector3d& t1, const Eigen::Vector3d& t2,
                                      const Eigen::Matrix3d& R0, double tol) {
  const Eigen::Vector3d axis = R0.col(0);
  const Eigen::Vector3d diff = t1 - t2;
  const double scale = std::max(1.0, t1.norm() + t2.norm());

  Proposition1Result out;
  out.t0 = diff.dot(axis);
  out.residual = (diff - out.t0 * axis).norm();
  if (out.residual > tol * scale)
    out.verdict = Proposition1Verdict::kInconsistent;
  else if (std::abs(out.t0) <= tol * scale)
    out.verdict = Proposition1Verdict::kZeroInternalForce;
  else if (std::abs(axis.z()) <= tol)
    out.verdict = Proposition1Verdict::kParallelToGround;
  else
    out.verdict = Proposition1Verdict::kTilted;
  return out;
}

const char* to_string(Proposition1Verdict v) {
  switch (v) {
    case Proposition1Verdict::kZeroInternalForce: return "zero-internal-force";
    case Proposition1Verdict::kParallelToGround: return "parallel-to-ground";
    case Proposition1Verdict::kTilted: return "tilted";
    case Proposition1Verdict::kInconsistent: return "inconsistent";
  }
  return "unknown";
}

std::vector<SweepPoint> sigma_sweep(const Geometry& geo, double theta_max, int points) {
  if (points < 2) throw ValidationError("a sweep needs at least two points");
  const double level = quad2_height(geo, 0.0, 0.0);
  std::vector<SweepPoint> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double th = -theta_max + 2 * theta_max * i / (points - 1);
    SweepPoint sp;
    sp.point = solve_internal_force(geo, th);
    sp.h2 = quad2_height(geo, th, 0.0);
    // NED: p2z = -h2, and the level pose is the reference.
    sp.p2z_err = -(sp.h2 - level);
    const SigmaSample sm = sigma_map(geo, th);
    sp.sigma = -sm.value;
    sp.slope = sm.slope;
    out.push_back(sp);
  }
  return out;
}

}  // namespace cotrans
