#pragma once

// Pure-state quantum trajectories of a driven qubit under projective measurement.
//
// Energies are expectation values of the bare Hamiltonian H = omega0 |1><1| (hbar = 1).
// Work is the energy change across a unitary segment; quantum heat is the energy change
// caused by measurement back-action.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qthermo/random.hpp"

namespace qthermo {

using Complex = std::complex<double>;

// Normalized qubit state in the energy basis {|0>, |1>}. The global phase is fixed on
// construction: the larger-magnitude amplitude (the first on a tie) is real and non-negative.
class PureState {
 public:
  PureState(Complex a0, Complex a1);

  /// Normalizes (a0, a1) before constructing; throws DomainError for the zero vector.
  static PureState normalized(Complex a0, Complex a1);
  static PureState ground();
  static PureState excited();
  static PureState plus();   ///< (|0> + |1>)/sqrt2
  static PureState minus();  ///< (-|0> + |1>)/sqrt2, up to the fixed global phase

  Complex operator[](std::size_t k) const { return k == 0 ? a0_ : a1_; }
  Complex inner(const PureState& other) const;  ///< <this|other>

  /// |<this|other>| = 1 within tolerance.
  bool same_ray(const PureState& other, double tolerance = 1e-12) const;

 private:
  Complex a0_;
  Complex a1_;
};

class Unitary2 {
 public:
  using Matrix = std::array<std::array<Complex, 2>, 2>;

  explicit Unitary2(const Matrix& m);
  static Unitary2 identity();

  Complex operator()(std::size_t row, std::size_t col) const { return m_[row][col]; }
  PureState apply(const PureState& state) const;
  Unitary2 adjoint() const;
  friend Unitary2 operator*(const Unitary2& a, const Unitary2& b);

 private:
  Matrix m_;
};

class MeasurementBasis {
 public:
  MeasurementBasis(PureState first, PureState second);

  static MeasurementBasis energy();      ///< {|0>, |1>}
  static MeasurementBasis plus_minus();  ///< {|+>, |->}

  const PureState& operator[](std::size_t k) const { return k == 0 ? first_ : second_; }
  /// Born probabilities |<m_k|psi>|^2, renormalized to sum to exactly 1.
  std::array<double, 2> probabilities(const PureState& state) const;
  /// Index k such that state lies on the ray of element k, if any.
  std::optional<std::size_t> eigenstate_index(const PureState& state, double tolerance = 1e-12) const;

 private:
  PureState first_;
  PureState second_;
};

struct MeasurementOutcome {
  std::size_t outcome = 0;
  PureState post_state = PureState::ground();
  double quantum_heat = 0.0;
  double probability = 0.0;
};

struct QuantumLedger {
  double work = 0.0;
  double quantum_heat = 0.0;
  std::optional<std::size_t> outcome;  ///< empty for a segment without measurement
  double outcome_probability = 1.0;
  double entropy_production = 0.0;     ///< -ln(outcome probability), nats
  double energy_before = 0.0;
  double energy_after = 0.0;
};

struct QuantumSegment {
  Unitary2 unitary;
  std::optional<MeasurementBasis> measurement;
};

struct WeightedState {
  double probability = 0.0;
  PureState state;
};

struct MeasurementEntropyReport {
  std::array<double, 2> probabilities{};
  std::array<double, 2> entropy_production{};  ///< ln(q_initial / p_k) per outcome
  double mean_entropy_production = 0.0;
  double von_neumann_before = 0.0;
  double von_neumann_after = 0.0;
  double delta_von_neumann = 0.0;
};

struct QuantumBranch {
  std::vector<std::size_t> outcomes;
  double probability = 0.0;
  double work = 0.0;
  double quantum_heat = 0.0;
  double entropy_production = 0.0;
  PureState final_state = PureState::ground();
};

inline constexpr std::size_t kQuantumBranchLimit = std::size_t{1} << 16;

/// Resonant Rabi rotation by angle omega_rabi * t: |0> -> cos(.)|0> + sin(.)|1>, real matrix.
Unitary2 rabi_propagator(double omega_rabi, double t);

double expected_energy(const PureState& state, double omega0);

MeasurementOutcome projective_measure(const PureState& state, const MeasurementBasis& basis,
                                      double omega0, RandomStream& stream);
MeasurementOutcome projective_measure(const PureState& state, const MeasurementBasis& basis,
                                      double omega0, std::uint64_t seed);

/// Both outcomes with their exact probabilities.
std::array<MeasurementOutcome, 2> measurement_branches(const PureState& state,
                                                       const MeasurementBasis& basis, double omega0);

/// Average quantum heat sum_k p_k <H>(m_k) - <H>(psi).
double mean_quantum_heat(const PureState& state, const MeasurementBasis& basis, double omega0);

/// Start in an eigenstate of the measured observable, evolve, measure. Throws ConfigError if
/// `initial` is not a basis element.
MeasurementEntropyReport entropy_production_protocol(const PureState& initial, const Unitary2& u,
                                                     const MeasurementBasis& basis);

/// Mixed start: weight q_k on basis element k.
MeasurementEntropyReport entropy_production_protocol(const std::array<double, 2>& initial_weights,
                                                     const Unitary2& u,
                                                     const MeasurementBasis& basis);

/// -Tr rho ln rho of the mixture, via the two eigenvalues of rho.
double von_neumann_entropy(std::span<const WeightedState> mixture);

std::vector<QuantumLedger> sample_quantum_trajectory(const PureState& initial,
                                                     std::span<const QuantumSegment> segments,
                                                     double omega0, std::uint64_t seed);
std::vector<QuantumLedger> sample_quantum_trajectory(const PureState& initial,
                                                     std::span<const QuantumSegment> segments,
                                                     double omega0, RandomStream& stream);

/// Every measurement record with its probability. Throws CapacityError above
/// kQuantumBranchLimit branches.
std::vector<QuantumBranch> enumerate_quantum_branches(const PureState& initial,
                                                      std::span<const QuantumSegment> segments,
                                                      double omega0);

}  // namespace qthermo
