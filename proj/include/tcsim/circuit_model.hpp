#pragma once

// Lumped-element model of the two-transmon / three-mode-coupler cell.
//
// Node numbering (1..7 in the circuit, 0..6 here):
//   1  internal node of qubit A (between its SQUID J1/J2 and J3)
//   2  island of qubit A
//   3  left end of the coupler line (J4 to node 4)
//   4  middle of the coupler line (SQUID J5/J6 to ground)
//   5  right end of the coupler line (J7 to node 4)
//   6  island of qubit B
//   7  internal node of qubit B (between J8 and its SQUID J9/J10)
//
// After the coupler coordinate change the seven coordinates are
//   [phi1, phi2, mid, left, right, phi6, phi7]
// with mid = phi4, left = phi3 - phi4, right = phi4 - phi5.

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tcsim {

/// Raised for parameter sets that cannot describe a physical circuit.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CircuitParams {
  /// E_J1 .. E_J10 in GHz.
  std::array<double, 10> josephson_energies{};

  // Node capacitances to ground, fF.
  double c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;
  // Junction capacitances, fF. Coupler junction capacitances are folded into
  // c34, c4 and c45.
  double cj1 = 0, cj2 = 0, cj3 = 0, cj8 = 0, cj9 = 0, cj10 = 0;
  // Mutual capacitances between nodes, fF.
  double c23 = 0, c26 = 0, c34 = 0, c35 = 0, c45 = 0, c56 = 0;

  double ej(int junction) const { return josephson_energies.at(junction - 1); }
  double& ej(int junction) { return josephson_energies.at(junction - 1); }

  /// Throws InvalidParams if any energy or capacitance is out of range.
  void validate() const;

  /// True when the pairs (J1,J10), (J2,J9), (J3,J8), (J4,J7) match.
  bool has_symmetric_junctions(double rel_tol = 1e-12) const;

  /// Designed device values.
  static CircuitParams design();
  /// Junction energies extracted from the measured device combined with the
  /// designed capacitances.
  static CircuitParams experiment();
};

/// External fluxes in units of the flux quantum.
struct FluxConfig {
  double phi_q1 = 0.0;
  double phi_q2 = 0.0;
  double phi_c = 0.0;
};

enum class Basis { Node, Mode };

struct CapacitanceMatrix {
  Eigen::Matrix<double, 7, 7> values;  // fF
  Basis basis = Basis::Node;
};

/// Node-basis 7x7 capacitance matrix. Throws InvalidParams if it is not
/// positive definite.
CapacitanceMatrix build_capacitance_matrix(const CircuitParams& params);

/// Coordinate map node = T * mode for the coupler normal-mode coordinates.
Eigen::Matrix<double, 7, 7> coupler_mode_transform();

/// T^T C T. Input must be in the node basis.
CapacitanceMatrix transform_to_coupler_modes(const CapacitanceMatrix& node);

/// Mode coordinates from node phases and back.
std::array<double, 7> node_to_mode_phases(std::span<const double, 7> node);
std::array<double, 7> mode_to_node_phases(std::span<const double, 7> mode);

/// Charging-energy matrix E_C = (e^2/2) C^-1 in GHz, same basis as the input.
/// Throws NumericalError if the matrix is singular.
Eigen::Matrix<double, 7, 7> inverse_capacitance_couplings(const CapacitanceMatrix& c);

/// Index of each simulated degree of freedom inside the 7 mode coordinates.
enum class Mode : int { QubitA = 0, QubitB = 1, CouplerLeft = 2, CouplerMid = 3, CouplerRight = 4 };
inline constexpr int kNumModes = 5;
inline constexpr std::array<int, kNumModes> kModeCoordinate = {1, 5, 3, 2, 4};

/// 5x5 charging-energy couplings between the simulated modes with the qubit
/// internal nodes carrying no charge (they follow the island adiabatically).
Eigen::Matrix<double, 5, 5> mode_charging_energies(const CircuitParams& params);

/// 3x3 charging energies of the coupler alone (left, mid, right), obtained by
/// deleting qubit rows and columns of the mode-basis capacitance matrix.
Eigen::Matrix3d coupler_charging_energies(const CircuitParams& params);

/// Magnitude of the effective Josephson energy of an asymmetric SQUID.
double effective_squid_energy(double ej_a, double ej_b, double phi);

/// Full potential energy (GHz) for phases given in mode coordinates.
double potential_energy(std::span<const double, 7> mode_phases, const FluxConfig& fluxes,
                        const CircuitParams& params);

/// Single-coordinate potential of each simulated mode, U(phi) in GHz.
using Potential = std::function<double(double)>;

/// Series stack of J3 (or J8) with the SQUID, reduced to the island phase by
/// minimising over the internal node phase.
Potential qubit_potential(double ej_series, double ej_squid);

Potential mode_potential(const CircuitParams& params, Mode mode, const FluxConfig& fluxes);

/// min over x in [lo, hi] of f by golden-section search; returns the argmin.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-10);

}  // namespace tcsim
