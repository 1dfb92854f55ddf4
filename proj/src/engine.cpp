#include "qthermo/engine.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qthermo/demon.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/parallel.hpp"

namespace qthermo {
namespace {

// Z = diag(1, -1): commutes with H, sends |-> to |+> up to phase.
const Unitary2& feedback_unitary() {
  static const Unitary2 z(Unitary2::Matrix{{{1.0, 0.0}, {0.0, -1.0}}});
  return z;
}

double p_minus(const EngineConfig& config) {
  const double s = std::sin(0.5 * config.rotation_angle());
  return s * s;
}

CycleRecord cycle_after_measurement(const EngineConfig& config, const PureState& driven,
                                    double energy_start, const MeasurementOutcome& measured) {
  CycleRecord r;
  r.energy_start = energy_start;
  r.energy_after_drive = expected_energy(driven, config.omega0);
  r.work_extracted = -(r.energy_after_drive - energy_start);
  r.quantum_heat = measured.quantum_heat;
  r.energy_after_measurement = expected_energy(measured.post_state, config.omega0);
  r.outcome = measured.outcome == 0 ? EngineOutcome::plus : EngineOutcome::minus;
  if (r.outcome == EngineOutcome::minus) {
    const PureState restored = feedback_unitary().apply(measured.post_state);
    r.feedback_work = expected_energy(restored, config.omega0) - r.energy_after_measurement;
  }
  r.landauer_cost = landauer_cost(p_minus(config), config.memory_temperature);
  return r;
}

}  // namespace

void EngineConfig::validate() const {
  std::vector<std::string> problems;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) problems.push_back(std::string(name) + " must be positive");
  };
  positive(omega0, "omega0");
  positive(omega_rabi, "omega_rabi");
  positive(tau, "tau");
  positive(memory_temperature, "memory_temperature");
  if (n_cycles == 0) problems.push_back("n_cycles must be at least 1");
  const double angle = rotation_angle();
  if (!(angle > 0.0 && angle < std::numbers::pi)) {
    problems.push_back("omega_rabi * tau must lie in (0, pi), got " + std::to_string(angle));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

Unitary2 engine_drive(const EngineConfig& config) {
  // Negative Rabi frequency: rotate |+> toward |0>, lowering <H>.
  return rabi_propagator(-config.omega_rabi, config.tau);
}

CycleRecord run_cycle(const EngineConfig& config, RandomStream& stream) {
  const PureState start = PureState::plus();
  const double e0 = expected_energy(start, config.omega0);
  const PureState driven = engine_drive(config).apply(start);
  const auto measured =
      projective_measure(driven, MeasurementBasis::plus_minus(), config.omega0, stream);
  return cycle_after_measurement(config, driven, e0, measured);
}

CycleRecord run_cycle_with_outcome(const EngineConfig& config, EngineOutcome outcome) {
  const PureState start = PureState::plus();
  const double e0 = expected_energy(start, config.omega0);
  const PureState driven = engine_drive(config).apply(start);
  const auto branches = measurement_branches(driven, MeasurementBasis::plus_minus(), config.omega0);
  return cycle_after_measurement(config, driven, e0,
                                 branches[outcome == EngineOutcome::plus ? 0 : 1]);
}

std::array<std::pair<double, CycleRecord>, 2> cycle_branches(const EngineConfig& config) {
  const PureState start = PureState::plus();
  const double e0 = expected_energy(start, config.omega0);
  const PureState driven = engine_drive(config).apply(start);
  const auto branches = measurement_branches(driven, MeasurementBasis::plus_minus(), config.omega0);
  return {std::pair{branches[0].probability, cycle_after_measurement(config, driven, e0, branches[0])},
          std::pair{branches[1].probability, cycle_after_measurement(config, driven, e0, branches[1])}};
}

EnginePerformance summarize_cycles(std::span<const CycleRecord> records, double tau) {
  EnginePerformance out;
  out.n_cycles = records.size();
  if (records.empty()) return out;
  std::uint64_t minus = 0;
  for (const auto& r : records) {
    out.mean_work += r.work_extracted;
    out.mean_quantum_heat += r.quantum_heat;
    out.mean_landauer += r.landauer_cost;
    minus += r.outcome == EngineOutcome::minus ? 1 : 0;
  }
  const double n = static_cast<double>(records.size());
  out.mean_work /= n;
  out.mean_quantum_heat /= n;
  out.mean_landauer /= n;
  out.outcome_minus_fraction = static_cast<double>(minus) / n;
  out.outcome_minus_std_error =
      std::sqrt(out.outcome_minus_fraction * (1.0 - out.outcome_minus_fraction) / n);
  out.eta = 1.0 - out.mean_landauer / out.mean_quantum_heat;
  out.power = (out.mean_work - out.mean_landauer) / tau;
  return out;
}

EnginePerformance run_engine(const EngineConfig& config, unsigned workers) {
  config.validate();
  std::vector<CycleRecord> records(config.n_cycles);
  parallel_for(records.size(), workers, [&](std::size_t i) {
    RandomStream stream(config.seed, i);
    records[i] = run_cycle(config, stream);
  });
  return summarize_cycles(records, config.tau);
}

EnginePerformance exact_engine_performance(const EngineConfig& config) {
  config.validate();
  EnginePerformance out;
  for (const auto& [p, r] : cycle_branches(config)) {
    out.mean_work += p * r.work_extracted;
    out.mean_quantum_heat += p * r.quantum_heat;
    out.mean_landauer += p * r.landauer_cost;
  }
  out.outcome_minus_fraction = p_minus(config);
  out.eta = 1.0 - out.mean_landauer / out.mean_quantum_heat;
  out.power = (out.mean_work - out.mean_landauer) / config.tau;
  out.n_cycles = 1;
  return out;
}

std::vector<ZenoPoint> zeno_sweep(const EngineConfig& config, std::span<const double> omega_tau_grid,
                                  unsigned workers) {
  if (omega_tau_grid.empty()) throw ConfigError("Zeno sweep grid is empty");
  std::vector<std::string> problems;
  for (double x : omega_tau_grid) {
    if (!(x > 0.0 && x < std::numbers::pi)) {
      problems.push_back("grid value " + std::to_string(x) + " is outside (0, pi)");
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  std::vector<ZenoPoint> out(omega_tau_grid.size());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    EngineConfig point = config;
    point.tau = omega_tau_grid[i] / config.omega_rabi;
    const EnginePerformance perf = exact_engine_performance(point);
    out[i] = ZenoPoint{omega_tau_grid[i],
                       perf.outcome_minus_fraction,
                       perf.mean_work,
                       perf.mean_quantum_heat,
                       perf.mean_landauer,
                       perf.eta,
                       perf.power,
                       config.omega0 * std::sin(0.5 * omega_tau_grid[i])};
  });
  return out;
}

}  // namespace qthermo
