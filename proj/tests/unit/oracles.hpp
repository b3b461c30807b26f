#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace oracle {

/// Lowest levels of 4 E_C n^2 + E_J (1 - cos phi) in the charge basis
/// n = -n_max..n_max, measured from the ground level.
inline Eigen::VectorXd transmon_charge_basis(double ej, double ec, int n_max, int levels) {
  const int dim = 2 * n_max + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double n = i - n_max;
    h(i, i) = 4.0 * ec * n * n + ej;
    if (i + 1 < dim) h(i, i + 1) = h(i + 1, i) = -0.5 * ej;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXd e = es.eigenvalues().head(levels);
  return e.array() - e(0);
}

/// Resonant Rabi problem H = (delta/2) sz + (omega/2) sx (GHz): population of
/// the upper level after t ns starting from the lower one.
inline double rabi_excited_population(double omega, double delta, double t) {
  const double w = std::hypot(omega, delta);
  const double s = std::sin(M_PI * w * t);
  return omega * omega / (w * w) * s * s;
}

}  // namespace oracle
