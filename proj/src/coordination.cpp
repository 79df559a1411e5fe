#include "cotrans/coordination.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cotrans/equilibrium.hpp"
#include "cotrans/errors.hpp"

namespace cotrans {

namespace {

/// First column of the Routh array for coefficients given highest power first.
std::vector<double> routh_first_column(const std::vector<double>& coeffs) {
  const std::size_t n = coeffs.size();
  const std::size_t width = (n + 1) / 2;
  std::vector<std::vector<double>> rows(n, std::vector<double>(width + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i % 2][i / 2] = coeffs[i];
  for (std::size_t r = 2; r < n; ++r) {
    const auto& a = rows[r - 2];
    const auto& b = rows[r - 1];
    for (std::size_t c = 0; c < width; ++c) rows[r][c] = (b[0] * a[c + 1] - a[0] * b[c + 1]) / b[0];
  }
  std::vector<double> column(n);
  for (std::size_t r = 0; r < n; ++r) column[r] = rows[r][0];
  return column;
}

}  // namespace

Matrix12d formation_error_matrix(const ControlGains<double>& g) {
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  Matrix12d A = Matrix12d::Zero();
  A.block<3, 3>(0, 6) = I;
  A.block<3, 3>(3, 9) = I;
  A.block<3, 3>(6, 0) = -g.k3 * I;
  A.block<3, 3>(6, 3) = -g.k1 * I;
  A.block<3, 3>(6, 6) = -g.k4 * I;
  A.block<3, 3>(6, 9) = -g.k2 * I;
  A.block<3, 3>(9, 0) = -g.k3 * I;
  A.block<3, 3>(9, 3) = -2 * g.k1 * I;
  A.block<3, 3>(9, 6) = -g.k4 * I;
  A.block<3, 3>(9, 9) = -2 * g.k2 * I;
  return A;
}

std::array<double, 5> characteristic_polynomial(const ControlGains<double>& g) {
  return {1.0, 2 * g.k2 + g.k4, 2 * g.k1 + g.k3 + g.k2 * g.k4, g.k1 * g.k4 + g.k2 * g.k3, g.k1 * g.k3};
}

GainReport validate_gains(const ControlGains<double>& g) {
  GainReport report;
  report.coefficients = characteristic_polynomial(g);
  report.routh_column = routh_first_column({report.coefficients.begin(), report.coefficients.end()});
  report.routh_pass = std::all_of(report.routh_column.begin(), report.routh_column.end(),
                                  [](double v) { return std::isfinite(v) && v > 0; });

  const Eigen::EigenSolver<Matrix12d> solver(formation_error_matrix(g), false);
  report.max_real_part = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const std::complex<double> ev = solver.eigenvalues()[i];
    report.eigenvalues.push_back(ev);
    report.max_real_part = std::max(report.max_real_part, ev.real());
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  report.eigen_pass = report.max_real_part < 0;
  return report;
}

void require_stable(const GainReport& report) {
  if (report.pass()) return;
  std::ostringstream msg;
  msg << "formation gains are not Hurwitz (max eigenvalue real part " << report.max_real_part << ")";
  throw UnstableGains(msg.str());
}

ForceGainReport validate_force_gains(const ControlGains<double>& g, const SectorBounds& bounds, double t0_max,
                                     double eps1, double gamma) {
  ForceGainReport r;
  r.k4_lower_bound = eps1 + t0_max / (4 * gamma);
  r.kf_upper_bound = eps1 * bounds.sigma_lo / (gamma * bounds.sigma_hi * bounds.sigma_hi);
  r.k4_ok = g.k4 > r.k4_lower_bound;
  r.kf_ok = g.k_f < r.kf_upper_bound;
  return r;
}

}  // namespace cotrans
