#pragma once

// Single-mode Hamiltonians H = 4 E_C n^2 + U(phi) on a periodic phase grid.

#include <vector>

#include <Eigen/Dense>

#include "tcsim/circuit_model.hpp"

namespace tcsim {

struct PhaseGrid {
  int points = 32;

  /// Grid of `points` equally spaced phases covering [-pi, pi).
  static PhaseGrid with_points(int points);
  /// Grid with the given step; 2*pi/step must be an even integer.
  static PhaseGrid with_step(double step);

  double step() const;
  double phase(int j) const;
};

struct SubsystemSpectrum {
  Eigen::VectorXd eigenvalues;       // GHz, ground level at 0
  Eigen::MatrixXd eigenvectors;      // phase-basis amplitudes, one column per level
  Eigen::MatrixXcd charge_elements;  // <k|n|l>
  std::vector<int> parity;           // +1 / -1 under phi -> -phi, 0 if undefined
  double ground_energy = 0.0;        // absolute ground energy before the shift, GHz
};

/// Lowest `n_levels` eigenpairs. Throws std::invalid_argument when
/// n_levels > points / 4.
SubsystemSpectrum diagonalize_subsystem(const Potential& potential, double charging_energy, const PhaseGrid& grid,
                                        int n_levels);

/// <k|n|l> for phase-basis vectors (columns), n = -i d/dphi evaluated in the
/// discrete Fourier basis. The unpaired Nyquist component carries no charge.
Eigen::MatrixXcd charge_matrix_elements(const Eigen::MatrixXcd& vectors, const PhaseGrid& grid);
Eigen::MatrixXcd charge_matrix_elements(const Eigen::MatrixXd& vectors, const PhaseGrid& grid);

/// Integer charge carried by Fourier index m of an N-point grid, in
/// [-N/2 + 1, N/2].
int fourier_charge(int index, int points);

/// +1 or -1 if the phase-basis vector is even or odd under phi -> -phi to
/// within `tol`, otherwise 0.
int reflection_parity(const Eigen::VectorXd& vector, const PhaseGrid& grid, double tol = 1e-8);

/// Flip signs so the first component within 1e-6 of the largest magnitude is
/// positive.
void fix_sign_convention(Eigen::MatrixXd& vectors);

}  // namespace tcsim
