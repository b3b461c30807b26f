#pragma once

// Figures of merit for a 4x4 (possibly non-unitary) computational block
// U_ji = <c_j|U|c_i>, basis order gg, ge, eg, ee with qubit A first.

#include <Eigen/Dense>

namespace tcsim {

using Matrix4c = Eigen::Matrix4cd;
using Matrix16 = Eigen::Matrix<double, 16, 16>;

Matrix4c cz_matrix();
Matrix4c cphase_matrix(double theta);

/// theta = arg U_ee - arg U_eg - arg U_ge + arg U_gg wrapped to (-pi, pi].
/// Throws NumericalError when more than half of the weight sits off the
/// diagonal.
double conditional_phase(const Matrix4c& u);

/// Multiplies by diag(1, e^-ib, e^-ig, e^-i(b+g)) e^-i arg U_gg with
/// b = arg U_ge - arg U_gg and g = arg U_eg - arg U_gg.
Matrix4c remove_single_qubit_phases(const Matrix4c& u);

/// Mean |U_ii|^2.
double target_population(const Matrix4c& u);
/// 1 - mean_i sum_j |U_ji|^2.
double leakage_error(const Matrix4c& u);

/// Two-qubit Pauli labels in order II, IX, IY, IZ, XI, ... (qubit A first).
Matrix4c pauli2(int index);

/// R_ij = Tr(P_i M P_j M^dagger) / 4 for the single-Kraus map rho -> M rho M^dagger.
Matrix16 pauli_transfer_matrix(const Matrix4c& m);

/// (Tr(R_ideal^T R) + 4) / 20 after removing single-qubit phases from u_sim.
double ptm_fidelity(const Matrix4c& u_sim, const Matrix4c& ideal);
/// Same formula without the phase correction.
double ptm_fidelity_raw(const Matrix4c& u_sim, const Matrix4c& ideal);

}  // namespace tcsim
