#pragma once

// Five-mode Hamiltonian: subsystem spectra in a tensor-product basis coupled
// capacitively by H_int = 4 sum_{i != j} E_Cij n_i n_j.
//
// Basis ordering follows Mode: [qubit A, qubit B, coupler left, coupler mid,
// coupler right], first mode most significant. Labels print qubits as g/e/f/h
// and coupler modes as digits, e.g. "eg010".

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/circuit_model.hpp"
#include "tcsim/linalg.hpp"
#include "tcsim/spectral_solver.hpp"

namespace tcsim {

/// Excitation number per mode.
using Label = std::vector<int>;

/// Five-mode labels print as "eg010"; other sizes print digits only.
std::string label_to_string(const Label& label);
/// Inverse of label_to_string; throws std::invalid_argument on bad input.
Label parse_label(const std::string& text);

/// Index of a product state in a basis with `levels` per mode.
int basis_index(const Label& digits, int levels);
Label basis_digits(int index, int modes, int levels);

struct ModelOptions {
  PhaseGrid grid = PhaseGrid::with_points(32);
  int levels = 5;         // per mode
  int kept_states = 60;   // lowest composite states kept for labeling
};

/// Spectra of the five modes at one flux point plus their couplings.
struct ModeSpectra {
  std::array<SubsystemSpectrum, kNumModes> modes;
  Eigen::Matrix<double, kNumModes, kNumModes> charging;  // GHz
};

SubsystemSpectrum mode_spectrum(const CircuitParams& params, Mode mode, const FluxConfig& fluxes,
                                const Eigen::Matrix<double, kNumModes, kNumModes>& charging, const PhaseGrid& grid,
                                int levels);

ModeSpectra build_mode_spectra(const CircuitParams& params, const FluxConfig& fluxes, const PhaseGrid& grid,
                               int levels);

/// Real symmetric matrix sum_i H_i + 4 sum_{i != j} E_Cij n_i n_j over any
/// number of modes. Charge operators of real eigenvectors are purely
/// imaginary, which makes every n_i n_j term real. Throws std::invalid_argument
/// if a spectrum has fewer than `levels` levels or the sizes disagree.
Eigen::MatrixXd assemble_full_hamiltonian(const std::vector<const SubsystemSpectrum*>& subsystems,
                                          const Eigen::MatrixXd& couplings, int levels);
Eigen::MatrixXd assemble_full_hamiltonian(const ModeSpectra& spectra, int levels);

struct CompositeSpectrum {
  int modes = kNumModes;
  int levels = 0;
  Eigen::VectorXd eigenvalues;          // GHz, ground = 0
  Eigen::MatrixXd eigenvectors;         // bare-basis columns
  std::vector<Label> labels;            // one per retained state
  std::vector<double> overlap_quality;  // squared overlap with the assigned label
  bool labeling_warning = false;        // a computational state has quality < 0.5

  std::optional<int> find(const Label& label) const;
  /// Energy of a labeled state; throws NumericalError naming a missing label.
  double energy(const Label& label) const;
};

/// Greedy unique assignment of bare labels to eigenvectors by squared overlap.
/// Returns, per eigenvector column, the bare-basis index it is labeled with.
std::vector<int> assign_labels(const Eigen::MatrixXd& eigenvectors);

/// Total reflection parity of every product state, or an empty vector if some
/// subsystem level has no definite parity. The coupling n_i n_j flips the
/// parity of two modes at once, so H never mixes the two total-parity sectors.
std::vector<int> product_parity(const std::vector<const SubsystemSpectrum*>& subsystems, int levels);

/// Lowest `kept` eigenpairs (absolute energies) of H, diagonalizing each
/// sector separately when `sectors` is non-empty.
linalg::SymmetricEigen eigh_by_sector(const Eigen::MatrixXd& hamiltonian, int kept, const std::vector<int>& sectors);

/// Lowest `kept` eigenpairs of H with labels. `modes` and `levels` describe
/// the tensor-product basis of H. A non-empty `sectors` (one id per basis
/// state) declares blocks H does not couple; each is diagonalized separately.
CompositeSpectrum diagonalize_and_label(const Eigen::MatrixXd& hamiltonian, int modes, int levels, int kept,
                                        const std::vector<int>& sectors = {});

/// zeta = f(ee000) - f(eg000) - f(ge000) in MHz.
double zz_strength(const CompositeSpectrum& spectrum);

struct ZZCurve {
  std::vector<double> flux;     // Phi0
  std::vector<double> zeta_mhz;
  std::vector<bool> labeling_warning;
};

/// Uniform grid of `points` fluxes from lo to hi inclusive.
std::vector<double> flux_grid(double lo, double hi, int points);

CompositeSpectrum composite_spectrum(const CircuitParams& params, const FluxConfig& fluxes,
                                     const ModelOptions& options);

ZZCurve zz_curve(const CircuitParams& params, const std::vector<double>& coupler_flux,
                 const ModelOptions& options, int workers);

/// Coupler-only three-mode levels (left, mid, right) with the qubit coordinates
/// removed from the capacitance matrix.
struct CouplerLevels {
  std::vector<double> flux;
  std::vector<std::string> labels;  // e.g. "010"
  Eigen::MatrixXd energies;         // flux x labels, GHz above the coupler ground
};

/// Levels with at most `max_excitations` total quanta.
CouplerLevels coupler_spectrum(const CircuitParams& params, const std::vector<double>& coupler_flux,
                               const ModelOptions& options, int max_excitations, int workers);

/// Lowest tunable-mode coupler transition (the "010" level) at one flux.
double coupler_tunable_frequency(const CircuitParams& params, double coupler_flux, const ModelOptions& options);

struct QubitTransitions {
  double f01 = 0.0;    // GHz
  double alpha = 0.0;  // f12 - f01, GHz
};

/// Isolated qubit subsystem at the given fluxes.
QubitTransitions qubit_transitions(const CircuitParams& params, Mode qubit, const FluxConfig& fluxes,
                                   const PhaseGrid& grid);

}  // namespace tcsim
