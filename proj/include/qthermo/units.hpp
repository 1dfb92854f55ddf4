#pragma once

#include <numbers>

namespace qthermo::units {

// Exact SI values (2019 redefinition).
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kLn2 = std::numbers::ln2;

enum class UnitSystem { natural, si };

/// Thermal energy scale: T itself in natural units (k_B = 1), k_B T in joules for SI.
constexpr double thermal_energy(double temperature, UnitSystem system) {
  return system == UnitSystem::si ? kBoltzmann * temperature : temperature;
}

/// Photon energy in joules for a field at `frequency_hz`.
constexpr double photon_energy_joules(double frequency_hz) {
  return kHbar * 2.0 * std::numbers::pi * frequency_hz;
}

}  // namespace qthermo::units
