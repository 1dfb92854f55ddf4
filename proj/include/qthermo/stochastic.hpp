#pragma once

// Discrete-time classical stochastic thermodynamics.
//
// A Protocol alternates Drive steps, which relabel the energy landscape while the micro-state
// is frozen (work), and Bath steps, which apply a column-stochastic kernel at a frozen
// landscape (heat). A Trajectory records the micro-state at every checkpoint: the start and
// the end of each Bath step. Natural units throughout: k_B = 1, entropies in nats.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "qthermo/random.hpp"

namespace qthermo {

class EnergyLandscape {
 public:
  explicit EnergyLandscape(std::vector<double> energies);

  std::size_t size() const noexcept { return energies_.size(); }
  double operator[](std::size_t state) const { return energies_[state]; }
  std::span<const double> energies() const noexcept { return energies_; }

  friend bool operator==(const EnergyLandscape&, const EnergyLandscape&) = default;

 private:
  std::vector<double> energies_;
};

class Distribution {
 public:
  explicit Distribution(std::vector<double> probabilities);

  static Distribution point_mass(std::size_t states, std::size_t state);
  static Distribution uniform(std::size_t states);

  std::size_t size() const noexcept { return probabilities_.size(); }
  double operator[](std::size_t state) const { return probabilities_[state]; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }

 private:
  std::vector<double> probabilities_;
};

// P[target | source]. Stored column-major so that the outgoing distribution of a source
// state is contiguous.
class TransitionKernel {
 public:
  /// rows[target][source]; every column must sum to 1 within 1e-12.
  explicit TransitionKernel(const std::vector<std::vector<double>>& rows);

  static TransitionKernel identity(std::size_t states);

  std::size_t size() const noexcept { return states_; }
  double operator()(std::size_t target, std::size_t source) const {
    return columns_[source * states_ + target];
  }
  std::span<const double> column(std::size_t source) const {
    return std::span<const double>(columns_).subspan(source * states_, states_);
  }

  Distribution apply(const Distribution& p) const;

  /// Kernel of `first` followed by `second`.
  friend TransitionKernel compose(const TransitionKernel& second, const TransitionKernel& first);

  /// p_eq(j) P[i|j] == p_eq(i) P[j|i] for all pairs, within `tolerance`.
  bool satisfies_detailed_balance(const Distribution& p_eq, double tolerance = 1e-12) const;

 private:
  TransitionKernel(std::size_t states, std::vector<double> columns);

  std::size_t states_ = 0;
  std::vector<double> columns_;
};

struct DriveStep {
  EnergyLandscape landscape;
};

struct BathStep {
  TransitionKernel kernel;
};

using ProtocolStep = std::variant<DriveStep, BathStep>;

class Protocol {
 public:
  /// Throws ConfigError on dimension mismatch, an empty step list, or temperature <= 0.
  Protocol(EnergyLandscape initial_landscape, std::vector<ProtocolStep> steps, double temperature);

  const EnergyLandscape& initial_landscape() const noexcept { return initial_; }
  const EnergyLandscape& final_landscape() const;
  const std::vector<ProtocolStep>& steps() const noexcept { return steps_; }
  double temperature() const noexcept { return temperature_; }
  std::size_t state_count() const noexcept { return initial_.size(); }
  std::size_t bath_step_count() const noexcept { return bath_steps_; }
  /// Number of recorded micro-states per trajectory: bath steps + 1.
  std::size_t checkpoint_count() const noexcept { return bath_steps_ + 1; }

 private:
  EnergyLandscape initial_;
  std::vector<ProtocolStep> steps_;
  double temperature_;
  std::size_t bath_steps_ = 0;
};

struct Trajectory {
  std::vector<std::size_t> states;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Thermodynamic record of one trajectory. When the backward trajectory is impossible,
// entropy_production (and possibly delta_stochastic_entropy) hold +infinity.
struct TrajectoryLedger {
  double work = 0.0;
  double heat = 0.0;
  double delta_energy = 0.0;
  double delta_stochastic_entropy = 0.0;
  double entropy_production = 0.0;
  bool backward_probability_zero = false;
};

/// Which distribution the backward experiment starts from.
enum class BackwardBoundary {
  pushforward,        ///< exact forward marginal at the last checkpoint
  final_equilibrium,  ///< Boltzmann distribution of the final landscape (Jarzynski protocol)
};

Distribution boltzmann_distribution(const EnergyLandscape& landscape, double temperature);

/// F = -T ln Z.
double free_energy(const EnergyLandscape& landscape, double temperature);

/// Lazy Metropolis: with probability 1/2 a move to a uniformly chosen other state is proposed
/// and accepted with min(1, exp(-dE/T)); holding and rejections sit on the diagonal.
/// Detailed-balanced against boltzmann_distribution(landscape, temperature).
TransitionKernel metropolis_kernel(const EnergyLandscape& landscape, double temperature);

Trajectory sample_trajectory(const Protocol& protocol, const Distribution& initial,
                             RandomStream& stream);
Trajectory sample_trajectory(const Protocol& protocol, const Distribution& initial,
                             std::uint64_t seed);

/// Per-trajectory work, heat and entropy production. `p1` is normally the pushforward of
/// `p0` (see evolve_distribution); other choices model counterfactual backward experiments.
TrajectoryLedger ledger(const Protocol& protocol, const Trajectory& trajectory,
                        const Distribution& p0, const Distribution& p1);

/// Exact marginal at every checkpoint.
std::vector<Distribution> evolve_distribution(const Protocol& protocol, const Distribution& initial);

/// Backward starting distribution for the chosen boundary convention.
Distribution backward_boundary(const Protocol& protocol, const Distribution& initial,
                               BackwardBoundary boundary);

/// D = sum p (ln p - ln p_eq), in nats, with 0 ln 0 = 0.
double kl_to_equilibrium(const Distribution& p, const Distribution& p_eq);

/// Relative form of the two-point entropy production for a detailed-balance kernel:
/// ln(p0(i)/p_eq(i)) - ln(p1(j)/p_eq(j)).
double entropy_production_relative_form(const Distribution& p0, const Distribution& p1,
                                        const Distribution& p_eq, std::size_t initial_state,
                                        std::size_t final_state);

/// Drive from `from` to `to` in `substeps` equal increments, each followed by one Metropolis
/// bath step at the new landscape.
Protocol linear_ramp_protocol(const EnergyLandscape& from, const EnergyLandscape& to,
                              std::size_t substeps, double temperature);

}  // namespace qthermo
