#include "qthermo/gate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qthermo/errors.hpp"
#include "qthermo/parallel.hpp"
#include "qthermo/units.hpp"

namespace qthermo {
namespace {

constexpr double kFieldNormTolerance = 1e-10;

std::array<PureState, 6> cardinal_states() {
  const double r = std::numbers::sqrt2 / 2;
  const Complex i(0.0, 1.0);
  return {PureState::ground(),       PureState::excited(),      PureState(r, r),
          PureState(r, -r),          PureState(r, r * i),       PureState(r, -r * i)};
}

double average_fidelity(double theta, const FieldState& field, double g, double t, unsigned workers) {
  const auto inputs = cardinal_states();
  const Unitary2 target_map = rabi_propagator(theta, 1.0);
  std::array<double, 6> fidelities{};
  parallel_for(inputs.size(), workers, [&](std::size_t k) {
    const JointState evolved = jc_evolve(JointState::product(inputs[k], field), g, t);
    const auto rho = evolved.reduced_qubit();
    const PureState target = target_map.apply(inputs[k]);
    Complex f = 0.0;
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) f += std::conj(target[a]) * rho[a][b] * target[b];
    }
    fidelities[k] = f.real();
  });
  double sum = 0.0;
  for (double f : fidelities) sum += f;
  return std::clamp(sum / 6.0, 0.0, 1.0);
}

}  // namespace

FieldState::FieldState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw ConfigError("field state needs at least the vacuum amplitude");
  double norm = 0.0;
  for (const auto& a : amplitudes_) norm += std::norm(a);
  if (std::abs(norm - 1.0) > kFieldNormTolerance) {
    throw DomainError("field state is not normalized: " + std::to_string(norm));
  }
}

double FieldState::mean_photon_number() const {
  double n = 0.0;
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) n += static_cast<double>(k) * std::norm(amplitudes_[k]);
  return n;
}

JointState JointState::product(const PureState& qubit, const FieldState& field) {
  JointState out;
  out.ground.reserve(field.amplitudes().size());
  out.excited.reserve(field.amplitudes().size());
  for (const auto& a : field.amplitudes()) {
    out.ground.push_back(qubit[0] * a);
    out.excited.push_back(qubit[1] * a);
  }
  return out;
}

double JointState::norm_squared() const {
  double n = 0.0;
  for (const auto& a : ground) n += std::norm(a);
  for (const auto& a : excited) n += std::norm(a);
  return n;
}

std::array<std::array<Complex, 2>, 2> JointState::reduced_qubit() const {
  std::array<std::array<Complex, 2>, 2> rho{};
  for (std::size_t n = 0; n < ground.size(); ++n) {
    rho[0][0] += ground[n] * std::conj(ground[n]);
    rho[0][1] += ground[n] * std::conj(excited[n]);
    rho[1][1] += excited[n] * std::conj(excited[n]);
  }
  rho[1][0] = std::conj(rho[0][1]);
  return rho;
}

std::size_t required_truncation(double n_bar) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) throw DomainError("mean photon number must be >= 0");
  return static_cast<std::size_t>(std::ceil(n_bar + 8.0 * std::sqrt(n_bar)));
}

double coherent_truncation_leakage(double n_bar, std::size_t n_max) {
  if (n_bar <= 0.0) return 0.0;
  const double log_nbar = std::log(n_bar);
  double tail = 0.0;
  for (std::size_t n = n_max + 1;; ++n) {
    const double k = static_cast<double>(n);
    const double term = std::exp(-n_bar + k * log_nbar - std::lgamma(k + 1.0));
    tail += term;
    if (k > n_bar && (term < 1e-300 || term < tail * 1e-17)) break;
  }
  return tail;
}

FieldState coherent_state(double n_bar, std::size_t n_max, double phase) {
  const std::size_t needed = required_truncation(n_bar);
  if (n_max > kMaxFockStates) {
    throw CapacityError("Fock truncation " + std::to_string(n_max) + " exceeds the limit of " +
                        std::to_string(kMaxFockStates) + " photons");
  }
  if (n_max < needed) {
    throw CapacityError("Fock truncation " + std::to_string(n_max) + " is below the required " +
                        std::to_string(needed) + " for mean photon number " + std::to_string(n_bar));
  }
  std::vector<Complex> amplitudes(n_max + 1, 0.0);
  if (n_bar == 0.0) {
    amplitudes[0] = 1.0;
    return FieldState(std::move(amplitudes));
  }
  const double log_nbar = std::log(n_bar);
  std::vector<double> log_mag(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double k = static_cast<double>(n);
    log_mag[n] = 0.5 * k * log_nbar - 0.5 * std::lgamma(k + 1.0);
  }
  const double shift = *std::max_element(log_mag.begin(), log_mag.end());
  double norm = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    amplitudes[n] = std::polar(std::exp(log_mag[n] - shift), phase * static_cast<double>(n));
    norm += std::norm(amplitudes[n]);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : amplitudes) a *= scale;
  return FieldState(std::move(amplitudes));
}

JointState jc_evolve(const JointState& joint, double g, double t) {
  if (!(g >= 0.0) || !(t >= 0.0)) throw DomainError("coupling and duration must be non-negative");
  if (joint.ground.size() != joint.excited.size() || joint.ground.empty()) {
    throw ConfigError("joint state halves differ in size");
  }
  JointState out = joint;
  const std::size_t n_max = joint.ground.size() - 1;
  const Complex minus_i(0.0, -1.0);
  // |1,N_max> has no partner inside the truncation and stays put.
  for (std::size_t n = 0; n < n_max; ++n) {
    const double angle = 0.5 * g * t * std::sqrt(static_cast<double>(n + 1));
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Complex e = joint.excited[n];
    const Complex d = joint.ground[n + 1];
    out.excited[n] = c * e + minus_i * s * d;
    out.ground[n + 1] = minus_i * s * e + c * d;
  }
  return out;
}

GateResult gate_fidelity(double theta, double n_bar, double g, const GateOptions& options) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("target angle must be >= 0");
  if (!(g > 0.0)) throw DomainError("coupling must be positive");
  GateResult result;
  result.target_rotation = theta;
  result.mean_photons = n_bar;
  result.n_max = required_truncation(n_bar);
  result.energy_joules = gate_energy_cost(n_bar, options.field_frequency_hz);
  if (theta == 0.0) return result;
  if (!(n_bar > 0.0)) throw DomainError("a nonzero rotation needs a nonzero field");

  const FieldState field = coherent_state(n_bar, result.n_max, std::numbers::pi / 2);
  const double t0 = theta / (g * std::sqrt(n_bar));
  result.pulse_time = t0;
  result.fidelity = average_fidelity(theta, field, g, t0, options.workers);

  if (options.calibration == PulseCalibration::optimized) {
    // Golden-section search on [0.9 t0, 1.1 t0].
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.9 * t0;
    double hi = 1.1 * t0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double fa = average_fidelity(theta, field, g, a, options.workers);
    double fb = average_fidelity(theta, field, g, b, options.workers);
    for (int iter = 0; iter < 60; ++iter) {
      if (fa < fb) {
        lo = a;
        a = b;
        fa = fb;
        b = lo + ratio * (hi - lo);
        fb = average_fidelity(theta, field, g, b, options.workers);
      } else {
        hi = b;
        b = a;
        fb = fa;
        a = hi - ratio * (hi - lo);
        fa = average_fidelity(theta, field, g, a, options.workers);
      }
    }
    const double best_t = fa > fb ? a : b;
    const double best_f = std::max(fa, fb);
    if (best_f > result.fidelity) {
      result.fidelity = best_f;
      result.pulse_time = best_t;
    }
  }
  return result;
}

std::uint64_t min_photons_for_fidelity(double threshold, double g, double theta, unsigned workers) {
  if (!(threshold > 0.5 && threshold < 1.0)) {
    throw DomainError("fidelity threshold must lie in (0.5, 1)");
  }
  std::vector<std::uint64_t> grid;
  for (int k = 0;; ++k) {
    const double value = std::ceil(std::pow(10.0, k / 32.0) - 1e-9);
    if (value > kMaxGridPhotons) break;
    const auto n = static_cast<std::uint64_t>(value);
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  GateOptions options;
  options.workers = workers;
  auto fidelity = [&](std::uint64_t n) {
    return gate_fidelity(theta, static_cast<double>(n), g, options).fidelity;
  };
  if (fidelity(grid.front()) >= threshold) return grid.front();
  if (fidelity(grid.back()) < threshold) {
    throw CapacityError("fidelity " + std::to_string(threshold) + " is not reached below " +
                        std::to_string(grid.back()) + " photons");
  }
  std::size_t lo = 0;                // fails
  std::size_t hi = grid.size() - 1;  // meets
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (fidelity(grid[mid]) >= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return grid[hi];
}

double gate_energy_cost(double n_bar, double frequency_hz) {
  if (!(n_bar >= 0.0) || !(frequency_hz >= 0.0)) {
    throw DomainError("photon number and frequency must be non-negative");
  }
  return n_bar * units::photon_energy_joules(frequency_hz);
}

}  // namespace qthermo
