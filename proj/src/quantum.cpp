#include "qthermo/quantum.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "qthermo/errors.hpp"

namespace qthermo {
namespace {

constexpr double kTolerance = 1e-12;

double neg_log(double p) {
  return p > 0.0 ? -std::log(p) : std::numeric_limits<double>::infinity();
}

}  // namespace

PureState::PureState(Complex a0, Complex a1) {
  const double norm = std::norm(a0) + std::norm(a1);
  if (!(std::abs(norm - 1.0) <= kTolerance)) {
    throw DomainError("qubit state is not normalized: |a0|^2 + |a1|^2 = " + std::to_string(norm));
  }
  const Complex pivot = std::abs(a1) > std::abs(a0) + kTolerance ? a1 : a0;
  const Complex phase = std::conj(pivot) / std::abs(pivot);
  a0_ = a0 * phase;
  a1_ = a1 * phase;
  // The pivot is real by construction; drop its rounding residue.
  if (std::abs(a1) > std::abs(a0) + kTolerance) {
    a1_ = std::abs(a1_);
  } else {
    a0_ = std::abs(a0_);
  }
}

PureState PureState::normalized(Complex a0, Complex a1) {
  const double norm = std::sqrt(std::norm(a0) + std::norm(a1));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("cannot normalize a zero vector");
  return PureState(a0 / norm, a1 / norm);
}

PureState PureState::ground() { return PureState(1.0, 0.0); }
PureState PureState::excited() { return PureState(0.0, 1.0); }
PureState PureState::plus() { return PureState(std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2); }
PureState PureState::minus() { return PureState(-std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2); }

Complex PureState::inner(const PureState& other) const {
  return std::conj(a0_) * other.a0_ + std::conj(a1_) * other.a1_;
}

bool PureState::same_ray(const PureState& other, double tolerance) const {
  return std::abs(std::abs(inner(other)) - 1.0) <= tolerance;
}

Unitary2::Unitary2(const Matrix& m) : m_(m) {
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      Complex entry = 0.0;
      for (std::size_t k = 0; k < 2; ++k) entry += std::conj(m_[k][i]) * m_[k][j];
      const Complex expected = i == j ? 1.0 : 0.0;
      if (std::abs(entry - expected) > kTolerance) throw DomainError("matrix is not unitary");
    }
  }
}

Unitary2 Unitary2::identity() { return Unitary2(Matrix{{{1.0, 0.0}, {0.0, 1.0}}}); }

PureState Unitary2::apply(const PureState& state) const {
  const Complex b0 = m_[0][0] * state[0] + m_[0][1] * state[1];
  const Complex b1 = m_[1][0] * state[0] + m_[1][1] * state[1];
  // Unitary action preserves the norm up to rounding; absorb it before the strict check.
  return PureState::normalized(b0, b1);
}

Unitary2 Unitary2::adjoint() const {
  Matrix out{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) out[i][j] = std::conj(m_[j][i]);
  }
  return Unitary2(out);
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
  Unitary2::Matrix out{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      out[i][j] = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    }
  }
  return Unitary2(out);
}

MeasurementBasis::MeasurementBasis(PureState first, PureState second)
    : first_(first), second_(second) {
  if (std::abs(first_.inner(second_)) > kTolerance) {
    throw DomainError("measurement basis states are not orthogonal");
  }
}

MeasurementBasis MeasurementBasis::energy() {
  return MeasurementBasis(PureState::ground(), PureState::excited());
}

MeasurementBasis MeasurementBasis::plus_minus() {
  return MeasurementBasis(PureState::plus(), PureState::minus());
}

std::array<double, 2> MeasurementBasis::probabilities(const PureState& state) const {
  std::array<double, 2> p{std::norm(first_.inner(state)), std::norm(second_.inner(state))};
  const double total = p[0] + p[1];
  p[0] /= total;
  p[1] /= total;
  return p;
}

std::optional<std::size_t> MeasurementBasis::eigenstate_index(const PureState& state,
                                                              double tolerance) const {
  if (first_.same_ray(state, tolerance)) return 0;
  if (second_.same_ray(state, tolerance)) return 1;
  return std::nullopt;
}

Unitary2 rabi_propagator(double omega_rabi, double t) {
  if (!(t >= 0.0)) throw DomainError("Rabi pulse duration must be non-negative");
  const double half = 0.5 * omega_rabi * t;
  const double c = std::cos(half);
  const double s = std::sin(half);
  return Unitary2(Unitary2::Matrix{{{c, -s}, {s, c}}});
}

double expected_energy(const PureState& state, double omega0) {
  return omega0 * std::norm(state[1]);
}

std::array<MeasurementOutcome, 2> measurement_branches(const PureState& state,
                                                       const MeasurementBasis& basis,
                                                       double omega0) {
  const auto p = basis.probabilities(state);
  const double before = expected_energy(state, omega0);
  std::array<MeasurementOutcome, 2> out;
  for (std::size_t k = 0; k < 2; ++k) {
    out[k].outcome = k;
    out[k].post_state = basis[k];
    out[k].probability = p[k];
    out[k].quantum_heat = expected_energy(basis[k], omega0) - before;
  }
  return out;
}

MeasurementOutcome projective_measure(const PureState& state, const MeasurementBasis& basis,
                                      double omega0, RandomStream& stream) {
  const auto branches = measurement_branches(state, basis, omega0);
  const std::array<double, 2> p{branches[0].probability, branches[1].probability};
  return branches[stream.categorical(p)];
}

MeasurementOutcome projective_measure(const PureState& state, const MeasurementBasis& basis,
                                      double omega0, std::uint64_t seed) {
  RandomStream stream(seed);
  return projective_measure(state, basis, omega0, stream);
}

double mean_quantum_heat(const PureState& state, const MeasurementBasis& basis, double omega0) {
  double q = 0.0;
  for (const auto& b : measurement_branches(state, basis, omega0)) q += b.probability * b.quantum_heat;
  return q;
}

double von_neumann_entropy(std::span<const WeightedState> mixture) {
  double r00 = 0.0;
  double r11 = 0.0;
  Complex r01 = 0.0;
  for (const auto& [w, s] : mixture) {
    r00 += w * std::norm(s[0]);
    r11 += w * std::norm(s[1]);
    r01 += w * s[0] * std::conj(s[1]);
  }
  const double half_trace = 0.5 * (r00 + r11);
  const double det = r00 * r11 - std::norm(r01);
  const double disc = std::sqrt(std::max(0.0, half_trace * half_trace - det));
  double entropy = 0.0;
  for (double lambda : {half_trace + disc, half_trace - disc}) {
    if (lambda > 0.0) entropy -= lambda * std::log(lambda);
  }
  return std::max(entropy, 0.0);
}

MeasurementEntropyReport entropy_production_protocol(const std::array<double, 2>& initial_weights,
                                                     const Unitary2& u,
                                                     const MeasurementBasis& basis) {
  const double total = initial_weights[0] + initial_weights[1];
  if (initial_weights[0] < 0.0 || initial_weights[1] < 0.0 || std::abs(total - 1.0) > kTolerance) {
    throw ConfigError("initial eigenstate weights must form a distribution");
  }
  // transition[k][j] = |<m_k| U |m_j>|^2
  std::array<std::array<double, 2>, 2> transition{};
  for (std::size_t j = 0; j < 2; ++j) {
    const auto p = basis.probabilities(u.apply(basis[j]));
    transition[0][j] = p[0];
    transition[1][j] = p[1];
  }
  MeasurementEntropyReport out;
  for (std::size_t k = 0; k < 2; ++k) {
    out.probabilities[k] = transition[k][0] * initial_weights[0] + transition[k][1] * initial_weights[1];
    out.entropy_production[k] = neg_log(out.probabilities[k]);
  }
  // Trajectory (j, k): P_F = q_j T_kj, P_B = p_k T_kj, so the entropy production is ln(q_j / p_k).
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      const double pf = initial_weights[j] * transition[k][j];
      if (pf == 0.0) continue;
      out.mean_entropy_production += pf * (std::log(initial_weights[j]) - std::log(out.probabilities[k]));
    }
  }
  const std::array<WeightedState, 2> before{WeightedState{initial_weights[0], basis[0]},
                                            WeightedState{initial_weights[1], basis[1]}};
  const std::array<WeightedState, 2> after{WeightedState{out.probabilities[0], basis[0]},
                                           WeightedState{out.probabilities[1], basis[1]}};
  out.von_neumann_before = von_neumann_entropy(before);
  out.von_neumann_after = von_neumann_entropy(after);
  out.delta_von_neumann = out.von_neumann_after - out.von_neumann_before;
  return out;
}

MeasurementEntropyReport entropy_production_protocol(const PureState& initial, const Unitary2& u,
                                                     const MeasurementBasis& basis) {
  const auto index = basis.eigenstate_index(initial, 1e-10);
  if (!index) {
    throw ConfigError("initial state is not an eigenstate of the measured observable; "
                      "pass eigenstate weights for a mixed start");
  }
  std::array<double, 2> weights{};
  weights[*index] = 1.0;
  return entropy_production_protocol(weights, u, basis);
}

std::vector<QuantumLedger> sample_quantum_trajectory(const PureState& initial,
                                                     std::span<const QuantumSegment> segments,
                                                     double omega0, std::uint64_t seed) {
  RandomStream stream(seed);
  return sample_quantum_trajectory(initial, segments, omega0, stream);
}

std::vector<QuantumLedger> sample_quantum_trajectory(const PureState& initial,
                                                     std::span<const QuantumSegment> segments,
                                                     double omega0, RandomStream& stream) {
  std::vector<QuantumLedger> out;
  out.reserve(segments.size());
  PureState state = initial;
  for (const auto& segment : segments) {
    QuantumLedger l;
    l.energy_before = expected_energy(state, omega0);
    state = segment.unitary.apply(state);
    const double driven = expected_energy(state, omega0);
    l.work = driven - l.energy_before;
    if (segment.measurement) {
      const auto m = projective_measure(state, *segment.measurement, omega0, stream);
      l.outcome = m.outcome;
      l.outcome_probability = m.probability;
      l.quantum_heat = m.quantum_heat;
      l.entropy_production = neg_log(m.probability);
      state = m.post_state;
    }
    l.energy_after = expected_energy(state, omega0);
    out.push_back(l);
  }
  return out;
}

std::vector<QuantumBranch> enumerate_quantum_branches(const PureState& initial,
                                                      std::span<const QuantumSegment> segments,
                                                      double omega0) {
  std::size_t measured = 0;
  for (const auto& s : segments) measured += s.measurement ? 1 : 0;
  if (measured > 16) {
    throw CapacityError("quantum trajectory has 2^" + std::to_string(measured) +
                        " branches, limit is " + std::to_string(kQuantumBranchLimit));
  }
  std::vector<QuantumBranch> branches;
  std::function<void(std::size_t, QuantumBranch)> walk = [&](std::size_t index, QuantumBranch branch) {
    if (index == segments.size()) {
      branches.push_back(std::move(branch));
      return;
    }
    const auto& segment = segments[index];
    const double before = expected_energy(branch.final_state, omega0);
    branch.final_state = segment.unitary.apply(branch.final_state);
    branch.work += expected_energy(branch.final_state, omega0) - before;
    if (!segment.measurement) {
      walk(index + 1, std::move(branch));
      return;
    }
    for (const auto& m : measurement_branches(branch.final_state, *segment.measurement, omega0)) {
      if (m.probability == 0.0) continue;
      QuantumBranch next = branch;
      next.outcomes.push_back(m.outcome);
      next.probability *= m.probability;
      next.quantum_heat += m.quantum_heat;
      next.entropy_production += neg_log(m.probability);
      next.final_state = m.post_state;
      walk(index + 1, std::move(next));
    }
  };
  QuantumBranch root;
  root.probability = 1.0;
  root.final_state = initial;
  walk(0, std::move(root));
  return branches;
}

}  // namespace qthermo
