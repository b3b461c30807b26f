#pragma once

// Two-qubit cross-entropy benchmarking on a density-matrix simulator.
//
// A reference layer applies one random single-qubit Clifford to each qubit
// simultaneously; an interleaved layer follows it with the two-qubit gate.
// After every gate slot both qubits decay for the slot duration (amplitude
// damping at 1/T1, pure dephasing at 1/T2* - 1/(2 T1)). Outcomes are ordered
// gg, ge, eg, ee with qubit A first.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/gate_metrics.hpp"

namespace tcsim {

struct NoiseModel {
  std::array<double, 2> t1 = {15.8, 8.3};        // us, qubit A, qubit B
  std::array<double, 2> t2_star = {8.6, 10.8};   // us
  double single_qubit_gate_time = 46.66;         // ns per X90
  double cz_gate_time = 60.0;                    // ns
  bool decoherence = true;
  /// Depolarizing parameter applied once per layer (1 = none).
  double depolarizing = 1.0;

  /// Throws std::invalid_argument on non-positive times or T2* > 2 T1.
  void validate() const;
  static NoiseModel noiseless();
};

/// The two-qubit gate of interleaved layers. `noisy` acts on the simulated
/// state (it may be trace-decreasing; lost weight is returned as the fully
/// mixed state), `ideal` enters the ideal probabilities.
struct InterleavedGate {
  Matrix4c noisy = cz_matrix();
  Matrix4c ideal = cz_matrix();
};

struct XebCircuit {
  std::uint64_t seed = 0;
  std::vector<std::array<int, 2>> cliffords;  // per layer, qubit A and B
  Eigen::Vector4d ideal = Eigen::Vector4d::Zero();
  Eigen::Vector4d measured = Eigen::Vector4d::Zero();
};

struct XebRun {
  std::uint64_t root_seed = 0;
  int shots = 0;  // 0: exact probabilities
  std::vector<int> depths;
  std::vector<std::vector<XebCircuit>> circuits;  // [depth][circuit]
  std::optional<InterleavedGate> interleaved;
};

struct XebOptions {
  std::vector<int> depths = {2, 5, 10, 15, 20, 25, 30, 40, 50};
  int circuits = 100;
  int shots = 3000;  // 0 selects the exact mode
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Seed of one circuit, independent of scheduling.
std::uint64_t circuit_seed(std::uint64_t root, int depth_index, int circuit_index);

XebRun run_xeb(const XebOptions& options, const NoiseModel& noise,
               const std::optional<InterleavedGate>& interleaved = std::nullopt);

/// Final outcome probabilities of one circuit.
Eigen::Vector4d ideal_probabilities(const std::vector<std::array<int, 2>>& cliffords,
                                    const std::optional<Matrix4c>& gate);
Eigen::Vector4d noisy_probabilities(const std::vector<std::array<int, 2>>& cliffords,
                                    const std::optional<Matrix4c>& gate, const NoiseModel& noise);

/// Per-circuit linear XEB fidelities at one depth,
/// (D sum q pi - 1) / (D <sum pi^2> - 1), denominator averaged over circuits.
std::vector<double> circuit_fidelities(const std::vector<XebCircuit>& circuits);
/// Mean of the above for every depth.
std::vector<double> depth_fidelities(const XebRun& run);

struct DecayFit {
  double a = 0.0;
  double p = 0.0;
  double a_stderr = 0.0;
  double p_stderr = 0.0;
};

/// Least-squares a p^m. Throws std::invalid_argument for fewer than 3 depths.
DecayFit fit_decay(const std::vector<int>& depths, const std::vector<double>& values);
DecayFit fit_depolarization(const XebRun& run);

struct InterleavedFidelity {
  double fidelity = 0.0;
  double stderr = 0.0;
};

/// F = p + (1 - p) / 4 with p = p2 / p1.
InterleavedFidelity interleaved_fidelity(double p1, double p2, double p1_stderr = 0.0, double p2_stderr = 0.0);

struct SpecklePurity {
  std::vector<double> sqrt_purity;  // per depth
  DecayFit decay;                   // per-cycle value in decay.p
};

/// sqrt of Var(q - 1/D) / Var(pi - 1/D) over circuits and outcomes, with the
/// multinomial shot-noise bias removed in sampled runs. Throws
/// std::invalid_argument for fewer than 20 circuits per depth.
SpecklePurity speckle_purity(const XebRun& run);

struct PhaseEstimate {
  double theta = 0.0;  // rad, within pi of the nominal gate phase taken in [0, 2 pi) (0 without a gate)
  double objective = 0.0;
  bool flat = false;
};

/// argmax over theta of the linear cross-entropy with CPHASE(theta)
/// interleaved in the ideal circuits, sum(D q.pi - 1) divided by
/// sqrt(sum(D pi.pi - 1) sum(D q.q - 1)).
PhaseEstimate extract_conditional_phase(const XebRun& run, int grid_points = 64);

}  // namespace tcsim
