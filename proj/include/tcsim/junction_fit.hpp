#pragma once

// Junction-area fit of the circuit to spectroscopic targets. Capacitances stay
// fixed; every junction shares one critical-current density, so areas and
// Josephson energies are proportional.

#include <array>
#include <string>
#include <vector>

#include "tcsim/composite_system.hpp"

namespace tcsim {

struct FitTargets {
  double f_a = 0.0;           // GHz, isolated qubit A f01
  double f_b = 0.0;           // GHz
  double alpha_a = 0.0;       // GHz, f12 - f01
  double alpha_b = 0.0;       // GHz
  double zeta_zz_zero = 0.0;  // MHz at zero coupler flux
  double f_c_half = 0.0;      // GHz, coupler tunable-mode level at 0.5 Phi0
};

struct FitOptions {
  ModelOptions model;                 // grid and truncation for the ZZ target
  double current_density = 1.0;       // uA / um^2
  int max_evaluations = 500;          // per stage
  double frequency_tolerance = 5e-3;  // GHz
  double zz_tolerance = 1e-2;         // MHz
};

struct FitResidual {
  std::string name;
  double target = 0.0;
  double achieved = 0.0;
  double tolerance = 0.0;
};

struct FitResult {
  CircuitParams params;
  std::array<double, 10> areas{};  // um^2
  std::vector<FitResidual> residuals;
  int evaluations = 0;
  bool converged = false;
};

/// Junction area in um^2 for a Josephson energy in GHz.
double junction_area(double ej_ghz, double current_density);
double josephson_energy(double area_um2, double current_density);

/// Model predictions for the six targets.
FitTargets predict_targets(const CircuitParams& params, const ModelOptions& model);

/// Nelder-Mead fit starting from `seed`. Each qubit varies its SQUID area
/// (J1:J2 and J10:J9 ratios fixed to the seed) and its series junction to
/// match f and alpha; the coupler varies J4 = J7 and the J5 + J6 area (ratio
/// fixed to the seed) to match the ZZ and coupler targets. On
/// non-convergence the best point is returned with converged = false.
FitResult fit_junction_areas(const FitTargets& targets, const CircuitParams& seed, const FitOptions& options);

}  // namespace tcsim
