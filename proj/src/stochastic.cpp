#include "qthermo/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qthermo/errors.hpp"

namespace qthermo {
namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

void require_positive_temperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw DomainError("temperature must be positive and finite, got " + std::to_string(temperature));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// log Z with the usual max-shift so large |E|/T cannot overflow.
double log_partition(const EnergyLandscape& landscape, double temperature) {
  const auto energies = landscape.energies();
  const double min_energy = *std::min_element(energies.begin(), energies.end());
  double sum = 0.0;
  for (double e : energies) sum += std::exp(-(e - min_energy) / temperature);
  return -min_energy / temperature + std::log(sum);
}

}  // namespace

EnergyLandscape::EnergyLandscape(std::vector<double> energies) : energies_(std::move(energies)) {
  if (energies_.size() < 2) throw ConfigError("energy landscape needs at least 2 micro-states");
  for (double e : energies_) {
    if (!std::isfinite(e)) throw ConfigError("energy landscape contains a non-finite value");
  }
}

Distribution::Distribution(std::vector<double> probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.empty()) throw ConfigError("distribution is empty");
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probability outside [0,1]: " + std::to_string(p));
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw ConfigError("distribution sums to " + std::to_string(total) + ", not 1");
  }
}

Distribution Distribution::point_mass(std::size_t states, std::size_t state) {
  if (state >= states) throw ConfigError("point mass state out of range");
  std::vector<double> p(states, 0.0);
  p[state] = 1.0;
  return Distribution(std::move(p));
}

Distribution Distribution::uniform(std::size_t states) {
  return Distribution(std::vector<double>(states, 1.0 / static_cast<double>(states)));
}

TransitionKernel::TransitionKernel(std::size_t states, std::vector<double> columns)
    : states_(states), columns_(std::move(columns)) {}

TransitionKernel::TransitionKernel(const std::vector<std::vector<double>>& rows) {
  states_ = rows.size();
  if (states_ == 0) throw ConfigError("transition kernel is empty");
  columns_.assign(states_ * states_, 0.0);
  for (std::size_t target = 0; target < states_; ++target) {
    if (rows[target].size() != states_) throw ConfigError("transition kernel is not square");
    for (std::size_t source = 0; source < states_; ++source) {
      const double p = rows[target][source];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("transition probability outside [0,1] at (" + std::to_string(target) +
                          "," + std::to_string(source) + ")");
      }
      columns_[source * states_ + target] = p;
    }
  }
  for (std::size_t source = 0; source < states_; ++source) {
    const auto col = column(source);
    const double total = std::accumulate(col.begin(), col.end(), 0.0);
    if (std::abs(total - 1.0) > kNormTolerance) {
      throw ConfigError("transition kernel column " + std::to_string(source) + " sums to " +
                        std::to_string(total) + ", not 1");
    }
  }
}

TransitionKernel TransitionKernel::identity(std::size_t states) {
  std::vector<double> columns(states * states, 0.0);
  for (std::size_t i = 0; i < states; ++i) columns[i * states + i] = 1.0;
  return TransitionKernel(states, std::move(columns));
}

Distribution TransitionKernel::apply(const Distribution& p) const {
  if (p.size() != states_) throw ConfigError("distribution and kernel dimensions differ");
  std::vector<double> out(states_, 0.0);
  for (std::size_t source = 0; source < states_; ++source) {
    const auto col = column(source);
    for (std::size_t target = 0; target < states_; ++target) out[target] += col[target] * p[source];
  }
  // Renormalize away accumulated rounding so the result stays a valid Distribution.
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v = std::clamp(v / total, 0.0, 1.0);
  return Distribution(std::move(out));
}

TransitionKernel compose(const TransitionKernel& second, const TransitionKernel& first) {
  if (second.size() != first.size()) throw ConfigError("cannot compose kernels of different size");
  const std::size_t n = first.size();
  std::vector<double> columns(n * n, 0.0);
  for (std::size_t source = 0; source < n; ++source) {
    for (std::size_t mid = 0; mid < n; ++mid) {
      const double p = first(mid, source);
      if (p == 0.0) continue;
      for (std::size_t target = 0; target < n; ++target) {
        columns[source * n + target] += second(target, mid) * p;
      }
    }
  }
  return TransitionKernel(n, std::move(columns));
}

bool TransitionKernel::satisfies_detailed_balance(const Distribution& p_eq, double tolerance) const {
  if (p_eq.size() != states_) return false;
  for (std::size_t i = 0; i < states_; ++i) {
    for (std::size_t j = i + 1; j < states_; ++j) {
      if (std::abs(p_eq[j] * (*this)(i, j) - p_eq[i] * (*this)(j, i)) > tolerance) return false;
    }
  }
  return true;
}

Protocol::Protocol(EnergyLandscape initial_landscape, std::vector<ProtocolStep> steps,
                   double temperature)
    : initial_(std::move(initial_landscape)), steps_(std::move(steps)), temperature_(temperature) {
  std::vector<std::string> problems;
  if (!(temperature_ > 0.0) || !std::isfinite(temperature_)) {
    problems.push_back("temperature must be positive");
  }
  if (steps_.empty()) problems.push_back("protocol needs at least one step");
  const std::size_t n = initial_.size();
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const std::size_t size = std::visit(
        Overloaded{[](const DriveStep& s) { return s.landscape.size(); },
                   [](const BathStep& s) { return s.kernel.size(); }},
        steps_[k]);
    if (size != n) {
      problems.push_back("step " + std::to_string(k) + " has dimension " + std::to_string(size) +
                         ", expected " + std::to_string(n));
    }
    if (std::holds_alternative<BathStep>(steps_[k])) ++bath_steps_;
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

const EnergyLandscape& Protocol::final_landscape() const {
  const EnergyLandscape* current = &initial_;
  for (const auto& step : steps_) {
    if (const auto* drive = std::get_if<DriveStep>(&step)) current = &drive->landscape;
  }
  return *current;
}

Distribution boltzmann_distribution(const EnergyLandscape& landscape, double temperature) {
  require_positive_temperature(temperature);
  const double log_z = log_partition(landscape, temperature);
  std::vector<double> p;
  p.reserve(landscape.size());
  for (double e : landscape.energies()) p.push_back(std::exp(-e / temperature - log_z));
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return Distribution(std::move(p));
}

double free_energy(const EnergyLandscape& landscape, double temperature) {
  require_positive_temperature(temperature);
  return -temperature * log_partition(landscape, temperature);
}

TransitionKernel metropolis_kernel(const EnergyLandscape& landscape, double temperature) {
  require_positive_temperature(temperature);
  const std::size_t n = landscape.size();
  // Lazy chain: stay put with probability 1/2, else propose one of the other states.
  const double proposal = 0.5 / static_cast<double>(n - 1);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t source = 0; source < n; ++source) {
    double leave = 0.0;
    for (std::size_t target = 0; target < n; ++target) {
      if (target == source) continue;
      const double delta = landscape[target] - landscape[source];
      const double accept = delta <= 0.0 ? 1.0 : std::exp(-delta / temperature);
      rows[target][source] = proposal * accept;
      leave += rows[target][source];
    }
    rows[source][source] = std::max(0.0, 1.0 - leave);
  }
  return TransitionKernel(rows);
}

Trajectory sample_trajectory(const Protocol& protocol, const Distribution& initial,
                             RandomStream& stream) {
  if (initial.size() != protocol.state_count()) {
    throw ConfigError("initial distribution has " + std::to_string(initial.size()) +
                      " states, protocol has " + std::to_string(protocol.state_count()));
  }
  Trajectory trajectory;
  trajectory.states.reserve(protocol.checkpoint_count());
  std::size_t state = stream.categorical(initial.probabilities());
  trajectory.states.push_back(state);
  for (const auto& step : protocol.steps()) {
    if (const auto* bath = std::get_if<BathStep>(&step)) {
      state = stream.categorical(bath->kernel.column(state));
      trajectory.states.push_back(state);
    }
  }
  return trajectory;
}

Trajectory sample_trajectory(const Protocol& protocol, const Distribution& initial,
                             std::uint64_t seed) {
  RandomStream stream(seed);
  return sample_trajectory(protocol, initial, stream);
}

TrajectoryLedger ledger(const Protocol& protocol, const Trajectory& trajectory,
                        const Distribution& p0, const Distribution& p1) {
  const std::size_t n = protocol.state_count();
  if (trajectory.states.size() != protocol.checkpoint_count()) {
    throw ConfigError("trajectory has " + std::to_string(trajectory.states.size()) +
                      " checkpoints, protocol needs " + std::to_string(protocol.checkpoint_count()));
  }
  if (p0.size() != n || p1.size() != n) throw ConfigError("boundary distribution dimension mismatch");
  for (std::size_t s : trajectory.states) {
    if (s >= n) throw ConfigError("trajectory state index out of range");
  }

  const std::size_t first = trajectory.states.front();
  const std::size_t last = trajectory.states.back();
  if (p0[first] == 0.0) throw DomainError("trajectory starts in a state with zero probability");

  TrajectoryLedger out;
  const EnergyLandscape* landscape = &protocol.initial_landscape();
  std::size_t checkpoint = 0;
  double conditional = 0.0;
  for (const auto& step : protocol.steps()) {
    const std::size_t state = trajectory.states[checkpoint];
    if (const auto* drive = std::get_if<DriveStep>(&step)) {
      out.work += drive->landscape[state] - (*landscape)[state];
      landscape = &drive->landscape;
    } else {
      const auto& kernel = std::get<BathStep>(step).kernel;
      const std::size_t next = trajectory.states[checkpoint + 1];
      out.heat += (*landscape)[next] - (*landscape)[state];
      const double forward = kernel(next, state);
      const double backward = kernel(state, next);
      if (forward == 0.0) throw DomainError("trajectory contains a zero-probability jump");
      if (backward == 0.0) {
        out.backward_probability_zero = true;
      } else {
        conditional += std::log(forward) - std::log(backward);
      }
      ++checkpoint;
    }
  }
  out.delta_energy = (*landscape)[last] - protocol.initial_landscape()[first];

  if (p1[last] == 0.0) {
    out.backward_probability_zero = true;
    out.delta_stochastic_entropy = kInfinity;
  } else {
    out.delta_stochastic_entropy = -std::log(p1[last]) + std::log(p0[first]);
  }
  out.entropy_production =
      out.backward_probability_zero ? kInfinity : out.delta_stochastic_entropy + conditional;
  return out;
}

std::vector<Distribution> evolve_distribution(const Protocol& protocol, const Distribution& initial) {
  if (initial.size() != protocol.state_count()) {
    throw ConfigError("initial distribution dimension does not match protocol");
  }
  std::vector<Distribution> marginals;
  marginals.reserve(protocol.checkpoint_count());
  marginals.push_back(initial);
  for (const auto& step : protocol.steps()) {
    if (const auto* bath = std::get_if<BathStep>(&step)) {
      marginals.push_back(bath->kernel.apply(marginals.back()));
    }
  }
  return marginals;
}

Distribution backward_boundary(const Protocol& protocol, const Distribution& initial,
                               BackwardBoundary boundary) {
  if (boundary == BackwardBoundary::final_equilibrium) {
    return boltzmann_distribution(protocol.final_landscape(), protocol.temperature());
  }
  return evolve_distribution(protocol, initial).back();
}

double kl_to_equilibrium(const Distribution& p, const Distribution& p_eq) {
  if (p.size() != p_eq.size()) throw ConfigError("distribution dimensions differ");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (p_eq[i] == 0.0) {
      throw DomainError("equilibrium distribution vanishes on state " + std::to_string(i) +
                        " where p is positive");
    }
    d += p[i] * (std::log(p[i]) - std::log(p_eq[i]));
  }
  return std::max(d, 0.0);
}

double entropy_production_relative_form(const Distribution& p0, const Distribution& p1,
                                        const Distribution& p_eq, std::size_t initial_state,
                                        std::size_t final_state) {
  if (p0[initial_state] == 0.0 || p_eq[initial_state] == 0.0 || p_eq[final_state] == 0.0) {
    throw DomainError("relative form undefined on zero-probability states");
  }
  if (p1[final_state] == 0.0) return kInfinity;
  return std::log(p0[initial_state] / p_eq[initial_state]) -
         std::log(p1[final_state] / p_eq[final_state]);
}

Protocol linear_ramp_protocol(const EnergyLandscape& from, const EnergyLandscape& to,
                              std::size_t substeps, double temperature) {
  if (from.size() != to.size()) throw ConfigError("ramp endpoints differ in dimension");
  if (substeps == 0) throw ConfigError("ramp needs at least one sub-step");
  std::vector<ProtocolStep> steps;
  steps.reserve(2 * substeps);
  for (std::size_t k = 1; k <= substeps; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(substeps);
    std::vector<double> energies(from.size());
    for (std::size_t i = 0; i < energies.size(); ++i) energies[i] = (1.0 - s) * from[i] + s * to[i];
    EnergyLandscape landscape(std::move(energies));
    auto kernel = metropolis_kernel(landscape, temperature);
    steps.emplace_back(DriveStep{std::move(landscape)});
    steps.emplace_back(BathStep{std::move(kernel)});
  }
  return Protocol(from, std::move(steps), temperature);
}

}  // namespace qthermo
