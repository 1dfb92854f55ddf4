#pragma once

// Measurement-fueled qubit engine. Each cycle starts in |+>:
//   (i)   resonant drive for tau, rotating toward lower energy (work extraction);
//   (ii)  projective measurement in {|+>, |->}, which refills the energy as quantum heat;
//   (iii) on outcome -, an energy-degenerate feedback unitary maps |-> back to |+>;
//   (iv)  the one-bit memory is erased at temperature T, costing T ln2 H[sin^2(omega_rabi tau/2)].
//
// work_extracted is positive when the qubit gives energy to the drive.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qthermo/quantum.hpp"
#include "qthermo/random.hpp"

namespace qthermo {

struct EngineConfig {
  double omega0 = 1.0;
  double omega_rabi = 1.0;
  double tau = 1.0;
  double memory_temperature = 0.1;
  std::uint64_t n_cycles = 1;
  std::uint64_t seed = 0;

  /// Throws ConfigError listing every violation.
  void validate() const;
  double rotation_angle() const noexcept { return omega_rabi * tau; }
};

enum class EngineOutcome { plus, minus };

struct CycleRecord {
  double work_extracted = 0.0;
  double quantum_heat = 0.0;
  double feedback_work = 0.0;
  double landauer_cost = 0.0;
  EngineOutcome outcome = EngineOutcome::plus;
  double energy_start = 0.0;
  double energy_after_drive = 0.0;
  double energy_after_measurement = 0.0;
};

struct EnginePerformance {
  double mean_work = 0.0;
  double mean_quantum_heat = 0.0;
  double mean_landauer = 0.0;
  double eta = 0.0;    ///< 1 - mean_landauer / mean_quantum_heat
  double power = 0.0;  ///< (mean_work - mean_landauer) / tau
  double outcome_minus_fraction = 0.0;
  double outcome_minus_std_error = 0.0;
  std::uint64_t n_cycles = 0;
};

struct ZenoPoint {
  double omega_tau = 0.0;
  double p_minus = 0.0;
  double work = 0.0;
  double quantum_heat = 0.0;
  double landauer = 0.0;
  double eta = 0.0;
  double power = 0.0;
  /// omega0 sin(omega_rabi tau / 2): the half-angle closed form, for comparison with `work`.
  double work_half_angle = 0.0;
};

/// Drive unitary of step (i).
Unitary2 engine_drive(const EngineConfig& config);

CycleRecord run_cycle(const EngineConfig& config, RandomStream& stream);

/// Cycle with the measurement result imposed (its probability is ignored).
CycleRecord run_cycle_with_outcome(const EngineConfig& config, EngineOutcome outcome);

/// Both cycle branches with their probabilities {P(+), P(-)}.
std::array<std::pair<double, CycleRecord>, 2> cycle_branches(const EngineConfig& config);

/// Sampled engine run: n_cycles cycles, cycle i drawing from stream (seed, i).
EnginePerformance run_engine(const EngineConfig& config, unsigned workers = 1);

/// Noise-free per-cycle averages from the two branches.
EnginePerformance exact_engine_performance(const EngineConfig& config);

/// Exact performance over a grid of rotation angles omega_rabi * tau, at fixed omega_rabi.
std::vector<ZenoPoint> zeno_sweep(const EngineConfig& config, std::span<const double> omega_tau_grid,
                                  unsigned workers = 1);

EnginePerformance summarize_cycles(std::span<const CycleRecord> records, double tau);

}  // namespace qthermo
