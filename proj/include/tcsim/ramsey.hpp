#pragma once

// Ramsey-type ZZ measurement on qubit B: pi/2, flux pulse of length t_d,
// virtual Z by 2 pi f_offset t_d, pi/2, read P(B = e). Qubit A is prepared
// in g or, with an ideal X, in e. Rotations are ideal and instantaneous.

#include <vector>

#include "tcsim/pulse_dynamics.hpp"

namespace tcsim {

struct SinusoidFit {
  double frequency = 0.0;  // 1 / time unit of the input
  double amplitude = 0.0;
  double phase = 0.0;      // rad
  double offset = 0.0;
  double residual_rms = 0.0;
};

/// Least-squares y = offset + amplitude cos(2 pi f t + phase): periodogram
/// over [0, Nyquist] of the mean sample spacing, then golden-section
/// refinement. Needs at least 4 samples.
SinusoidFit fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y);

struct RamseyOptions {
  double edge = 9.0;             // ns
  double residual_limit = 0.05;  // rms of the fit residual that raises the flag
};

struct RamseyTrace {
  std::vector<double> delay;       // ns
  std::vector<double> population;  // P(B = e)
  SinusoidFit fit;
  double frequency_mhz = 0.0;
  bool flagged = false;
};

struct RamseyZZ {
  RamseyTrace control_ground;
  RamseyTrace control_excited;
  double zz_mhz = 0.0;
};

/// P(B = e) versus delay. Nonzero amplitudes need every delay >= 2 edge; zero
/// amplitude is exact free evolution at any delay. Throws
/// std::invalid_argument when f_offset is at or above the grid's Nyquist
/// frequency.
RamseyTrace simulate_ramsey(const CzSimulator& sim, double amplitude, const std::vector<double>& delays,
                            double f_offset_mhz, bool control_excited, const RamseyOptions& options = {});

/// Both control states share one gate family; zz = f(excited) - f(ground).
RamseyZZ simulate_ramsey_zz(const CzSimulator& sim, double amplitude, const std::vector<double>& delays,
                            double f_offset_mhz, const RamseyOptions& options = {});

}  // namespace tcsim
