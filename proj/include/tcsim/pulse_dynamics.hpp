#pragma once

// Time evolution of the five-mode system under a Hann-edged coupler flux
// pulse, H(t) = H(Phi(t)), i dpsi/dt = 2 pi H psi (GHz, ns).
//
// The coupler middle mode is represented in its instantaneous eigenbasis at
// the current flux; between steps the state is carried over with the
// orthogonal polar factor of the overlap between consecutive bases. Edges use
// piecewise-constant midpoint steps, each applied with a Chebyshev expansion
// of the sparse H. The plateau is constant and is applied exactly from one
// dense eigendecomposition.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/gate_metrics.hpp"
#include "tcsim/sparse_hamiltonian.hpp"

namespace tcsim {

struct FluxPulse {
  double amplitude = 0.0;       // Phi0
  double total_duration = 18.0; // ns, whole pulse including both edges
  double edge_duration = 9.0;   // ns

  /// Throws std::invalid_argument unless 0 < edge and total >= 2 edge.
  void validate() const;
  double plateau_duration() const { return total_duration - 2.0 * edge_duration; }
  /// Throws std::out_of_range outside [0, total_duration].
  double value(double t) const;
};

/// Rising Hann half-window: amplitude * (1 - cos(pi t / edge)) / 2.
double hann_edge(double amplitude, double edge, double t);

using StateBlock = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// psi <- exp(-i 2 pi t H) psi with a Chebyshev series on Gershgorin bounds.
class ChebyshevPropagator {
 public:
  void apply(const CsrMatrix& h, double t, StateBlock& psi);
  int last_terms() const { return last_terms_; }

 private:
  StateBlock t0_, t1_, t2_, acc_;
  int last_terms_ = 0;
};

/// Orthogonal polar factor of to^T from (columns are phase-grid eigenvectors):
/// maps amplitudes in basis `from` to basis `to`.
Eigen::MatrixXd basis_transfer(const Eigen::MatrixXd& to, const Eigen::MatrixXd& from);

/// Applies a levels x levels matrix to the middle-mode index of every column.
void rotate_mid_mode(const Eigen::MatrixXd& r, int levels, StateBlock& psi);

/// How populations are read out during the pulse. Both agree at zero flux.
enum class ReadoutFrame {
  /// Zero-flux dressed states with the coupler middle-mode quantum number
  /// taken in its instantaneous eigenbasis.
  Adiabatic,
  /// Zero-flux dressed states as fixed vectors in Hilbert space.
  ZeroFlux,
};

struct DynamicsOptions {
  PhaseGrid grid = PhaseGrid::with_points(32);
  ReadoutFrame readout = ReadoutFrame::Adiabatic;
  int levels = 4;
  double edge_step = 0.01;       // ns
  double sample_interval = 0.1;  // ns, trajectory output
  double norm_tolerance = 1e-6;
};

struct Trajectories {
  std::vector<double> time;                 // ns
  std::vector<std::string> labels;          // recorded dressed levels
  std::vector<Eigen::MatrixXd> populations; // per initial state: time x labels
  std::vector<double> theta;                // unwrapped conditional phase
  std::vector<double> target_population;
  std::vector<double> leakage_error;
  std::vector<double> max_norm_drift;
  /// Largest population reached by every dressed level over all samples and
  /// initial states, indexed like CzSimulator::dressed().labels.
  Eigen::VectorXd peak_population;
};

struct GateResult {
  FluxPulse pulse;
  Matrix4c raw_unitary;            // <c_j|U|c_i>, lab frame
  Matrix4c computational_unitary;  // single-qubit phases removed
  double theta = 0.0;
  double target_population = 0.0;
  double leakage_error = 0.0;
  double fidelity = 0.0;           // against CZ
  Trajectories trajectories;       // filled only when requested
};

/// Metrics of a raw computational block.
GateResult evaluate_block(const Matrix4c& raw, const FluxPulse& pulse);

class GateFamily;

/// Pulse-independent state: cached subsystems and the zero-flux dressed basis.
/// All methods are const and safe to call concurrently.
class CzSimulator {
 public:
  CzSimulator(const CircuitParams& params, const DynamicsOptions& options);

  const DynamicsOptions& options() const { return options_; }
  const FluxHamiltonian& hamiltonian() const { return ham_; }
  /// Every eigenstate of H(0), labeled.
  const CompositeSpectrum& dressed() const { return dressed_; }
  /// dim x 4, columns gg, ge, eg, ee.
  const Eigen::MatrixXd& computational_states() const { return comp_; }
  /// Energies of the columns above, GHz relative to the ground state.
  Eigen::Vector4d computational_energies() const;

  /// Rise edge + plateau eigendecomposition for one amplitude; the fall edge
  /// is obtained from the rise by time-reversal symmetry.
  GateFamily family(double amplitude, double edge) const;

  /// Step-by-step propagation of the four computational states through the
  /// whole pulse. `record` fills trajectories for `tracked` labels (all
  /// non-empty entries must be dressed labels).
  GateResult propagate(const FluxPulse& pulse, bool record, const std::vector<std::string>& tracked = {}) const;

  /// Evolve an arbitrary block given in the zero-flux product basis through
  /// one edge. The block is returned in the basis of the middle mode at the
  /// edge's final flux, described by `mid`.
  void run_edge(double amplitude, double edge, bool rising, StateBlock& psi, SubsystemSpectrum& mid,
                ChebyshevPropagator& prop) const;

 private:
  CircuitParams params_;
  DynamicsOptions options_;
  FluxHamiltonian ham_;
  CompositeSpectrum dressed_;
  Eigen::MatrixXd comp_;
  Eigen::Vector4i comp_index_;
};

/// U(plateau) for a fixed amplitude and edge as a function of plateau time.
class GateFamily {
 public:
  GateFamily() = default;
  GateFamily(double amplitude, double edge, Eigen::VectorXd energies, Eigen::MatrixXcd coefficients);

  double amplitude() const { return amplitude_; }
  double edge() const { return edge_; }

  /// Raw block after rise, `plateau` ns at the amplitude, and fall.
  Matrix4c block(double plateau) const;
  GateResult evaluate(double plateau) const;

 private:
  double amplitude_ = 0.0;
  double edge_ = 0.0;
  Eigen::VectorXd energies_;          // eigenvalues of H(amplitude)
  Eigen::MatrixXcd coefficients_;     // V^T psi_rise, dim x 4
};

struct CalibrationOptions {
  int solution = 1;              // k-th theta = pi crossing in plateau time
  double max_duration = 300.0;   // ns
  double phase_step = 0.05;      // ns, unwrapping grid
  double tolerance = 1e-9;       // ns, bisection
};

/// Total duration at which the unwrapped conditional phase reaches the k-th
/// odd multiple of pi. Throws NumericalError if none exists below the cap.
double calibrate_gate_duration(const GateFamily& family, const CalibrationOptions& options);

/// Conditional phase without the phase-likeness check.
double conditional_phase_raw(const Matrix4c& u);

struct ScanPoint {
  double amplitude = 0.0;
  int solution = 1;
  bool found = false;
  double duration = 0.0;
  double theta = 0.0;
  double fidelity = 0.0;
  double target_population = 0.0;
  double leakage_error = 0.0;
};

std::vector<ScanPoint> fidelity_amplitude_scan(const CzSimulator& sim, const std::vector<double>& amplitudes,
                                               const std::vector<int>& solutions, double edge,
                                               const CalibrationOptions& options, int workers);

}  // namespace tcsim
