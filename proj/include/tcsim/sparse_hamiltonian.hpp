#pragma once

// Sparse five-mode Hamiltonian whose only flux dependence is the coupler
// middle (SQUID) mode. The other four subsystem spectra are computed once.

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/composite_system.hpp"
#include "tcsim/kernels/kernels.hpp"

namespace tcsim {

struct CsrMatrix {
  int rows = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  kernels::CsrView view() const { return {rows, row_ptr.data(), col.data(), val.data()}; }
  Eigen::MatrixXd to_dense() const;
  /// Entries with |value| > drop.
  static CsrMatrix from_dense(const Eigen::MatrixXd& m, double drop = 0.0);
  /// Gershgorin interval containing the spectrum of a symmetric matrix.
  std::pair<double, double> spectral_bounds() const;
};

class FluxHamiltonian {
 public:
  static constexpr int kMid = static_cast<int>(Mode::CouplerMid);

  FluxHamiltonian(const CircuitParams& params, const PhaseGrid& grid, int levels, double phi_q1 = 0.0,
                  double phi_q2 = 0.0);

  int levels() const { return levels_; }
  int dim() const { return dim_; }
  const PhaseGrid& grid() const { return grid_; }
  const Eigen::Matrix<double, kNumModes, kNumModes>& charging() const { return charging_; }
  const SubsystemSpectrum& fixed_mode(Mode m) const { return fixed_[static_cast<int>(m)]; }

  /// Middle-mode spectrum at coupler flux phi_c.
  SubsystemSpectrum mid_spectrum(double phi_c) const;

  /// H for the given middle-mode spectrum, in the product basis built from it.
  /// Throws NumericalError if a coupling falls outside the sparsity pattern.
  void fill(const SubsystemSpectrum& mid, CsrMatrix& h) const;
  CsrMatrix matrix(const SubsystemSpectrum& mid) const;
  Eigen::MatrixXd dense(const SubsystemSpectrum& mid) const;
  /// Total-parity sector of each product state, empty if undefined.
  std::vector<int> sectors(const SubsystemSpectrum& mid) const;

  int nonzeros() const { return static_cast<int>(pattern_.col.size()); }

 private:
  CircuitParams params_;
  PhaseGrid grid_;
  int levels_ = 0;
  int dim_ = 0;
  FluxConfig qubit_flux_;
  Eigen::Matrix<double, kNumModes, kNumModes> charging_;
  std::vector<SubsystemSpectrum> fixed_;  // indexed by Mode; the mid entry is the zero-flux spectrum
  CsrMatrix pattern_;                     // values = flux-independent part
  std::vector<int> diag_slot_;            // per row
  std::vector<int> mid_slot_;             // per row, partner, a, b; -1 if absent
};

}  // namespace tcsim
