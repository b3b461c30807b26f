#include "tcsim/spectral_solver.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "tcsim/linalg.hpp"
#include "tcsim/units.hpp"

namespace tcsim {

PhaseGrid PhaseGrid::with_points(int points) {
  if (points < 4 || points % 2 != 0) throw std::invalid_argument("phase grid needs an even number of points >= 4");
  return PhaseGrid{points};
}

PhaseGrid PhaseGrid::with_step(double step) {
  if (!(step > 0.0)) throw std::invalid_argument("phase step must be positive");
  const double n = units::kTwoPi / step;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * rounded) throw std::invalid_argument("phase step must divide 2*pi");
  return with_points(static_cast<int>(rounded));
}

double PhaseGrid::step() const { return units::kTwoPi / points; }

double PhaseGrid::phase(int j) const { return -units::kPi + j * step(); }

int fourier_charge(int index, int points) { return index <= points / 2 ? index : index - points; }

namespace {

// F(m, j) = exp(-i m phi_j) / sqrt(N)
Eigen::MatrixXcd dft_matrix(const PhaseGrid& grid) {
  const int n = grid.points;
  Eigen::MatrixXcd f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int mi = 0; mi < n; ++mi) {
    const int m = fourier_charge(mi, n);
    for (int j = 0; j < n; ++j) f(mi, j) = std::polar(norm, -m * grid.phase(j));
  }
  return f;
}

}  // namespace

void fix_sign_convention(Eigen::MatrixXd& v) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double mx = v.col(k).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, k)) >= mx * (1.0 - 1e-6)) {
        if (v(i, k) < 0) v.col(k) *= -1.0;
        break;
      }
    }
  }
}

int reflection_parity(const Eigen::VectorXd& v, const PhaseGrid& grid, double tol) {
  const int n = grid.points;
  if (v.size() != n) throw std::invalid_argument("vector length does not match the grid");
  // phi_j = -pi + j*step maps to phi_{(n - j) mod n}
  double overlap = 0.0;
  for (int j = 0; j < n; ++j) overlap += v(j) * v((n - j) % n);
  overlap /= v.squaredNorm();
  if (std::abs(overlap - 1.0) < tol) return 1;
  if (std::abs(overlap + 1.0) < tol) return -1;
  return 0;
}

Eigen::MatrixXcd charge_matrix_elements(const Eigen::MatrixXcd& vectors, const PhaseGrid& grid) {
  if (vectors.rows() != grid.points) throw std::invalid_argument("eigenvector length does not match the grid");
  const Eigen::MatrixXcd a = dft_matrix(grid) * vectors;
  Eigen::VectorXd charge(grid.points);
  for (int mi = 0; mi < grid.points; ++mi)
    charge(mi) = (mi == grid.points / 2) ? 0.0 : fourier_charge(mi, grid.points);
  Eigen::MatrixXcd n = a.adjoint() * charge.asDiagonal() * a;
  return 0.5 * (n + n.adjoint());
}

Eigen::MatrixXcd charge_matrix_elements(const Eigen::MatrixXd& vectors, const PhaseGrid& grid) {
  return charge_matrix_elements(Eigen::MatrixXcd(vectors.cast<std::complex<double>>()), grid);
}

SubsystemSpectrum diagonalize_subsystem(const Potential& potential, double ec, const PhaseGrid& grid, int n_levels) {
  const int n = grid.points;
  if (n_levels < 1 || n_levels > n / 4) {
    throw std::invalid_argument("n_levels = " + std::to_string(n_levels) + " needs at most points/4 = " +
                                std::to_string(n / 4));
  }
  if (!(ec > 0.0)) throw std::invalid_argument("charging energy must be positive");

  // K_jk = (1/N) sum_m 4 E_C m^2 cos(m (phi_j - phi_k)); depends on j - k only.
  Eigen::VectorXd row(n);
  for (int d = 0; d < n; ++d) {
    double s = 0.0;
    for (int mi = 0; mi < n; ++mi) {
      const double m = fourier_charge(mi, n);
      s += m * m * std::cos(m * d * grid.step());
    }
    row(d) = 4.0 * ec * s / n;
  }
  Eigen::MatrixXd h(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) h(j, k) = row((j - k + n) % n);
  for (int j = 0; j < n; ++j) h(j, j) += potential(grid.phase(j));

  auto eig = linalg::eigh(h);
  SubsystemSpectrum out;
  out.ground_energy = eig.values(0);
  out.eigenvalues = eig.values.head(n_levels).array() - eig.values(0);
  out.eigenvectors = eig.vectors.leftCols(n_levels);
  fix_sign_convention(out.eigenvectors);
  out.charge_elements = charge_matrix_elements(out.eigenvectors, grid);
  for (int k = 0; k < n_levels; ++k) out.parity.push_back(reflection_parity(out.eigenvectors.col(k), grid));
  return out;
}

}  // namespace tcsim
