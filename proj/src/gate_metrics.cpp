#include "tcsim/gate_metrics.hpp"

#include <cmath>
#include <complex>

#include "tcsim/circuit_model.hpp"
#include "tcsim/units.hpp"

namespace tcsim {

using cd = std::complex<double>;

Matrix4c cz_matrix() { return cphase_matrix(units::kPi); }

Matrix4c cphase_matrix(double theta) {
  Matrix4c m = Matrix4c::Identity();
  m(3, 3) = std::polar(1.0, theta);
  return m;
}

double conditional_phase(const Matrix4c& u) {
  const double total = u.cwiseAbs2().sum();
  const double diag = u.diagonal().cwiseAbs2().sum();
  if (total <= 0.0 || total - diag > 0.5 * total)
    throw NumericalError("gate is not phase-like: off-diagonal weight exceeds one half");
  const double th = std::arg(u(3, 3)) - std::arg(u(2, 2)) - std::arg(u(1, 1)) + std::arg(u(0, 0));
  double w = std::remainder(th, units::kTwoPi);
  if (w <= -units::kPi) w += units::kTwoPi;
  return w;
}

Matrix4c remove_single_qubit_phases(const Matrix4c& u) {
  const double g0 = std::arg(u(0, 0));
  const double b = std::arg(u(1, 1)) - g0;
  const double g = std::arg(u(2, 2)) - g0;
  Eigen::Vector4cd z;
  z << 1.0, std::polar(1.0, -b), std::polar(1.0, -g), std::polar(1.0, -(b + g));
  return std::polar(1.0, -g0) * (z.asDiagonal() * u);
}

double target_population(const Matrix4c& u) { return u.diagonal().cwiseAbs2().mean(); }

double leakage_error(const Matrix4c& u) { return 1.0 - u.cwiseAbs2().sum() / 4.0; }

Matrix4c pauli2(int index) {
  const cd i(0.0, 1.0);
  Eigen::Matrix2cd p[4];
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, -i, i, 0;
  p[3] << 1, 0, 0, -1;
  const auto& a = p[index / 4];
  const auto& b = p[index % 4];
  Matrix4c out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

Matrix16 pauli_transfer_matrix(const Matrix4c& m) {
  Matrix4c p[16];
  for (int k = 0; k < 16; ++k) p[k] = pauli2(k);
  Matrix16 r;
  for (int j = 0; j < 16; ++j) {
    const Matrix4c img = m * p[j] * m.adjoint();
    for (int i = 0; i < 16; ++i) r(i, j) = (p[i] * img).trace().real() / 4.0;
  }
  return r;
}

double ptm_fidelity_raw(const Matrix4c& u_sim, const Matrix4c& ideal) {
  const Matrix16 r = pauli_transfer_matrix(u_sim);
  const Matrix16 r0 = pauli_transfer_matrix(ideal);
  const double overlap = (r0.transpose() * r).trace();
  return (overlap + 4.0) / 20.0;
}

double ptm_fidelity(const Matrix4c& u_sim, const Matrix4c& ideal) {
  return ptm_fidelity_raw(remove_single_qubit_phases(u_sim), ideal);
}

}  // namespace tcsim
