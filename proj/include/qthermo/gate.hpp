#pragma once

// Energetic cost of a single-qubit gate driven by a finite coherent field.
//
// The qubit and one field mode interact through the resonant Jaynes-Cummings coupling. It is
// block diagonal: each pair {|1,n>, |0,n+1>} mixes at angle g t sqrt(n+1)/2, and |0,0> is
// invariant. A field of mean photon number nbar and pulse time t = theta/(g sqrt(nbar)) rotates
// the qubit by theta in the semiclassical limit. At finite nbar the qubit entangles with the
// field, and tracing the field out costs fidelity.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qthermo/quantum.hpp"

namespace qthermo {

class FieldState {
 public:
  /// Amplitudes over Fock states |0>..|N_max>; normalized within 1e-10.
  explicit FieldState(std::vector<Complex> amplitudes);

  std::size_t n_max() const noexcept { return amplitudes_.size() - 1; }
  const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
  double mean_photon_number() const;

 private:
  std::vector<Complex> amplitudes_;
};

// Qubit (x) field amplitudes: ground[n] = <0,n|psi>, excited[n] = <1,n|psi>.
struct JointState {
  std::vector<Complex> ground;
  std::vector<Complex> excited;

  static JointState product(const PureState& qubit, const FieldState& field);
  double norm_squared() const;
  /// Reduced qubit density matrix after tracing out the field.
  std::array<std::array<Complex, 2>, 2> reduced_qubit() const;
};

enum class PulseCalibration {
  semiclassical,  ///< t = theta / (g sqrt(nbar))
  optimized,      ///< t maximizing the average fidelity near the semiclassical time
};

struct GateResult {
  double fidelity = 1.0;
  double mean_photons = 0.0;
  double energy_joules = 0.0;
  double target_rotation = 0.0;
  double pulse_time = 0.0;
  std::size_t n_max = 0;
};

struct GateOptions {
  double field_frequency_hz = 6e9;
  PulseCalibration calibration = PulseCalibration::semiclassical;
  unsigned workers = 1;
};

/// Largest Fock cutoff coherent_state accepts.
inline constexpr std::size_t kMaxFockStates = 10'000'000;

/// ceil(nbar + 8 sqrt(nbar)).
std::size_t required_truncation(double n_bar);

/// Poisson mass beyond n_max for mean nbar.
double coherent_truncation_leakage(double n_bar, std::size_t n_max);

/// Amplitudes alpha^n / sqrt(n!) e^{i phase n}, |alpha|^2 = nbar, renormalized after
/// truncation. Throws CapacityError when n_max < required_truncation(nbar) or
/// n_max > kMaxFockStates.
FieldState coherent_state(double n_bar, std::size_t n_max, double phase = 0.0);

JointState jc_evolve(const JointState& joint, double g, double t);

/// Average over the six cardinal qubit inputs of <target| rho_qubit |target>, target being
/// rabi_propagator applied to the input. The field has phase pi/2, for which the semiclassical
/// map is exactly that rotation.
GateResult gate_fidelity(double theta, double n_bar, double g, const GateOptions& options = {});

/// Smallest nbar on a logarithmic grid (32 points per decade, floor 1) whose fidelity reaches
/// `threshold`. Throws DomainError for thresholds outside (0.5, 1) and CapacityError when the
/// grid is exhausted.
std::uint64_t min_photons_for_fidelity(double threshold, double g, double theta,
                                       unsigned workers = 1);

/// nbar hbar 2 pi f, joules.
double gate_energy_cost(double n_bar, double frequency_hz);

inline constexpr double kMaxGridPhotons = 1e6;

}  // namespace qthermo
