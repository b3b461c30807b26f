#pragma once

// Unit conventions used throughout the library:
//   energies and frequencies in GHz (h = 1), times in ns, capacitances in fF,
//   external fluxes in units of the flux quantum, phases in radians.

#include <numbers>

namespace tcsim::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);

// e^2 / (2 * 1 fF) expressed as a frequency: 19.3701 GHz.
// E_C [GHz] = kChargingEnergyPerInverseFemtofarad / C [fF].
inline constexpr double kChargingEnergyPerInverseFemtofarad =
    kElementaryCharge * kElementaryCharge / (2.0 * 1e-15) / kPlanck * 1e-9;

// E_J / h = Phi_0 I_c / (2 pi h) = I_c / (4 pi e); per microampere: 496.7 GHz.
inline constexpr double kJosephsonEnergyPerMicroampere =
    1e-6 / (4.0 * std::numbers::pi * kElementaryCharge) * 1e-9;

// Critical-current density shared by every junction of one fabrication run.
inline constexpr double kDefaultCurrentDensity = 1.0;  // uA / um^2

}  // namespace tcsim::units
