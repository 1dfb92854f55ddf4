#include "qthermo/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string_view>

#include <fmt/core.h>

#include "qthermo/demon.hpp"
#include "qthermo/engine.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/estimators.hpp"
#include "qthermo/gate.hpp"
#include "qthermo/protocol_json.hpp"
#include "qthermo/quantum.hpp"
#include "qthermo/random.hpp"
#include "qthermo/stochastic.hpp"
#include "qthermo/units.hpp"

namespace qthermo {
namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent master seed per criterion and sub-task.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) { return mix(seed ^ mix(tag)); }

struct Check {
  bool passed = true;
  std::string detail;

  void require(bool condition, std::string_view what) {
    if (!condition) {
      passed = false;
      detail += fmt::format("FAILED[{}] ", what);
    }
  }
  void note(std::string_view text) {
    if (!detail.empty() && detail.back() != ' ') detail += "; ";
    detail += text;
  }
};

// Two-state and three-state protocols with strictly positive kernels.
constexpr std::array<std::string_view, 7> kBundledProtocols = {
    R"({"states": 2, "initial_energies": [0, 1], "temperature": 1,
        "steps": [{"bath_matrix": [[0.7, 0.4], [0.3, 0.6]]}], "initial": [0.9, 0.1]})",
    R"({"states": 2, "initial_energies": [0, 0], "temperature": 0.5,
        "steps": [{"drive": [0, 1.5]}, {"bath_matrix": [[0.8, 0.25], [0.2, 0.75]]},
                  {"drive": [0.5, 0]}, {"bath_matrix": [[0.6, 0.5], [0.4, 0.5]]}]})",
    R"({"states": 2, "initial_energies": [1, 0], "temperature": 2,
        "steps": [{"bath_matrix": [[0.5, 0.125], [0.5, 0.875]]}, {"bath_matrix": [[0.9, 0.3], [0.1, 0.7]]},
                  {"bath_matrix": [[0.25, 0.75], [0.75, 0.25]]}], "initial": [0.5, 0.5]})",
    R"({"states": 2, "initial_energies": [0, 0], "temperature": 1,
        "steps": [{"drive": [0, 2]}, {"bath_matrix": [[0.95, 0.1], [0.05, 0.9]]}]})",
    R"({"states": 2, "initial_energies": [0, 1], "temperature": 1,
        "steps": [{"bath": "metropolis"}, {"drive": [0.5, 0.5]}, {"bath_matrix": [[0.6, 0.3], [0.4, 0.7]]},
                  {"drive": [1, 0]}, {"bath": "metropolis"}, {"drive": [0, 1]},
                  {"bath_matrix": [[0.2, 0.9], [0.8, 0.1]]}, {"bath": "metropolis"}],
        "initial": [0.3, 0.7]})",
    R"({"states": 3, "initial_energies": [0, 0.5, 1], "temperature": 1,
        "steps": [{"bath_matrix": [[0.5, 0.25, 0.125], [0.25, 0.5, 0.375], [0.25, 0.25, 0.5]]},
                  {"drive": [1, 0, 0.5]},
                  {"bath_matrix": [[0.6, 0.2, 0.3], [0.3, 0.7, 0.1], [0.1, 0.1, 0.6]]}]})",
    R"({"states": 3, "initial_energies": [0, 1, 2], "temperature": 0.7,
        "steps": [{"drive": [1, 0, 2]}, {"bath": "metropolis"},
                  {"bath_matrix": [[0.4, 0.3, 0.2], [0.3, 0.4, 0.2], [0.3, 0.3, 0.6]]}],
        "initial": [0.2, 0.3, 0.5]})",
};

constexpr std::uint64_t kMonteCarloSamples = 100'000;

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CriterionResult criterion_ift(std::uint64_t seed, unsigned workers) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  double worst_exact = 0.0;
  for (std::size_t k = 0; k < kBundledProtocols.size(); ++k) {
    const ProtocolDocument doc = protocol_from_json_text(kBundledProtocols[k]);
    const Distribution initial = doc.initial.value_or(
        boltzmann_distribution(doc.protocol.initial_landscape(), doc.protocol.temperature()));
    const auto exact = enumerate_exact(doc.protocol, initial);
    const double error = std::abs(exact.mean_exp_minus_entropy_production - 1.0);
    worst_exact = std::max(worst_exact, error);
    c.require(error <= 1e-10, fmt::format("exact p{}", k + 1));
    const auto mc = ift_estimate(doc.protocol, initial, kMonteCarloSamples, derive_seed(seed, 100 + k), workers);
    const double z = mc.std_error > 0.0 ? (mc.mean - 1.0) / mc.std_error : 0.0;
    c.require(mc.absolute_irreversibility_fraction == 0.0 && std::abs(mc.mean - 1.0) <= 4.0 * mc.std_error,
              fmt::format("mc p{}", k + 1));
    c.note(fmt::format("p{} mc={} se={} z={}", k + 1, num(mc.mean), num(mc.std_error), num(z)));
  }
  c.note("max exact |<exp(-S)>-1|=" + num(worst_exact));
  const double seconds = elapsed_since(start);
  c.require(seconds < 10.0, "runtime < 10 s");
  return {1, "IFT on bundled protocols", c.passed, c.detail, seconds};
}

CriterionResult criterion_jarzynski(std::uint64_t seed, unsigned workers) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const EnergyLandscape flat({0.0, 0.0});
  const EnergyLandscape tilted({0.0, 1.0});
  const Protocol quench(flat, {DriveStep{tilted}}, 1.0);
  const Distribution p0 = boltzmann_distribution(flat, 1.0);
  const double delta_f = free_energy(tilted, 1.0) - free_energy(flat, 1.0);
  const double target = std::exp(-delta_f);
  const auto exact = enumerate_exact(quench, p0, BackwardBoundary::final_equilibrium);
  c.require(std::abs(exact.mean_exp_minus_work_over_t - target) <= 1e-12, "exact = exp(-dF)");
  c.require(std::abs(target - 0.6839) <= 1e-4, "exp(-dF) = 0.6839");
  const auto mc = jarzynski_estimate(quench, 1.0, kMonteCarloSamples, derive_seed(seed, 200), workers);
  c.require(std::abs(mc.estimate.mean - target) <= 4.0 * mc.estimate.std_error, "mc within 4 sigma");
  c.note(fmt::format("exact={} target={} mc={} se={}", num(exact.mean_exp_minus_work_over_t), num(target),
                     num(mc.estimate.mean), num(mc.estimate.std_error)));

  // Dissipation <S_i> = (<W> - dF)/T for the ramp, from marginals; enumeration cross-checks
  // the short ramps.
  constexpr std::array<std::size_t, 6> substeps = {1, 2, 5, 10, 20, 50};
  double previous = std::numeric_limits<double>::infinity();
  std::string trail;
  for (std::size_t k : substeps) {
    const Protocol ramp = linear_ramp_protocol(flat, tilted, k, 1.0);
    const double dissipation = (marginal_averages(ramp, p0).mean_work - delta_f) / 1.0;
    if (k <= 10) {
      const auto enumerated = enumerate_exact(ramp, p0, BackwardBoundary::final_equilibrium);
      c.require(std::abs(enumerated.mean_entropy_production - dissipation) <= 1e-10,
                fmt::format("ramp K={} enumeration agrees", k));
    }
    c.require(dissipation < previous, fmt::format("decreasing at K={}", k));
    previous = dissipation;
    trail += fmt::format("{}K{}={}", trail.empty() ? "" : " ", k, num(dissipation));
  }
  c.require(previous < 0.01, "K=50 below 0.01 nats");
  c.note("<S_i> " + trail);
  return {2, "Jarzynski equality and quasi-static limit", c.passed, c.detail, elapsed_since(start)};
}

// Random landscape, temperature, start distribution and a kernel in detailed balance with the
// Boltzmann distribution: Metropolis or a symmetric-rate construction.
struct BalancedInstance {
  EnergyLandscape landscape;
  double temperature;
  Distribution p0;
  TransitionKernel kernel;
};

TransitionKernel symmetric_rate_kernel(const Distribution& p_eq, RandomStream& rng) {
  const std::size_t n = p_eq.size();
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s[i][j] = s[j][i] = 0.05 + rng.uniform();
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) out += i == j ? 0.0 : s[i][j] * p_eq[i];
    worst = std::max(worst, out);
  }
  const double scale = (0.2 + 0.75 * rng.uniform()) / worst;
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double leave = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      rows[i][j] = scale * s[i][j] * p_eq[i];
      leave += rows[i][j];
    }
    rows[j][j] = 1.0 - leave;
  }
  return TransitionKernel(rows);
}

std::vector<double> random_energies(std::size_t n, RandomStream& rng) {
  std::vector<double> e(n);
  for (auto& x : e) x = -2.0 + 4.0 * rng.uniform();
  return e;
}

BalancedInstance balanced_instance(std::uint64_t seed, std::size_t index) {
  RandomStream rng(seed, index);
  const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 3.0);
  EnergyLandscape landscape(random_energies(n, rng));
  const double temperature = 0.3 + 2.7 * rng.uniform();
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = 0.05 + rng.uniform());
  for (auto& x : p) x /= total;
  const Distribution p_eq = boltzmann_distribution(landscape, temperature);
  TransitionKernel kernel = index % 2 == 0 ? metropolis_kernel(landscape, temperature)
                                           : symmetric_rate_kernel(p_eq, rng);
  return {std::move(landscape), temperature, Distribution(std::move(p)), std::move(kernel)};
}

constexpr std::size_t kBalancedInstances = 100;

CriterionResult criterion_two_point_forms(std::uint64_t seed, unsigned) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t base = derive_seed(seed, 300);
  double worst_form = 0.0;
  double worst_mean = 0.0;
  double worst_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kBalancedInstances; ++k) {
    const auto inst = balanced_instance(base, k);
    const Distribution p_eq = boltzmann_distribution(inst.landscape, inst.temperature);
    c.require(inst.kernel.satisfies_detailed_balance(p_eq), fmt::format("instance {} balanced", k));
    const Protocol protocol(inst.landscape, {BathStep{inst.kernel}}, inst.temperature);
    const Distribution p1 = inst.kernel.apply(inst.p0);
    const auto report = enumerate_exact(protocol, inst.p0);
    for (const auto& row : report.rows) {
      if (!row.ledger) continue;
      const double relative = entropy_production_relative_form(inst.p0, p1, p_eq, row.trajectory.states[0],
                                                               row.trajectory.states[1]);
      worst_form = std::max(worst_form, std::abs(row.ledger->entropy_production - relative));
    }
    const double d0 = kl_to_equilibrium(inst.p0, p_eq);
    const double d1 = kl_to_equilibrium(p1, p_eq);
    worst_mean = std::max(worst_mean, std::abs(report.mean_entropy_production - (d0 - d1)));
    worst_increase = std::max(worst_increase, d1 - d0);
  }
  c.require(worst_form <= 1e-10, "forms agree per trajectory");
  c.require(worst_mean <= 1e-10, "<S_i> = -dD");
  c.require(worst_increase <= 0.0, "D non-increasing");
  c.note(fmt::format("instances={} max|form diff|={} max|<S_i>+dD|={} max(D1-D0)={}", kBalancedInstances,
                     num(worst_form), num(worst_mean), num(worst_increase)));
  return {3, "Two-point entropy production forms and relaxation", c.passed, c.detail, elapsed_since(start)};
}

// Drive, balanced bath, drive, balanced bath: kernels follow the current landscape.
Protocol balanced_multistep(std::uint64_t seed, std::size_t index, Distribution& p0) {
  const auto inst = balanced_instance(seed, index);
  RandomStream rng(seed ^ 0x5bd1e995ULL, index);
  const std::size_t n = inst.landscape.size();
  std::vector<ProtocolStep> steps;
  for (int round = 0; round < 2; ++round) {
    EnergyLandscape next(random_energies(n, rng));
    const Distribution p_eq = boltzmann_distribution(next, inst.temperature);
    TransitionKernel kernel = round == 0 ? symmetric_rate_kernel(p_eq, rng) : metropolis_kernel(next, inst.temperature);
    steps.emplace_back(DriveStep{std::move(next)});
    steps.emplace_back(BathStep{std::move(kernel)});
  }
  p0 = inst.p0;
  return Protocol(inst.landscape, std::move(steps), inst.temperature);
}

CriterionResult criterion_thermal_decomposition(std::uint64_t seed, unsigned) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t single = derive_seed(seed, 300);
  const std::uint64_t multi = derive_seed(seed, 400);
  double worst = 0.0;
  std::size_t trajectories = 0;
  auto inspect = [&](const Protocol& protocol, const Distribution& p0) {
    const auto report = enumerate_exact(protocol, p0);
    for (const auto& row : report.rows) {
      if (!row.ledger) continue;
      const auto& l = *row.ledger;
      worst = std::max(worst, std::abs(l.entropy_production -
                                       (l.delta_stochastic_entropy - l.heat / protocol.temperature())));
      ++trajectories;
    }
  };
  for (std::size_t k = 0; k < kBalancedInstances; ++k) {
    const auto inst = balanced_instance(single, k);
    inspect(Protocol(inst.landscape, {BathStep{inst.kernel}}, inst.temperature), inst.p0);
    Distribution p0 = Distribution::uniform(2);
    const Protocol protocol = balanced_multistep(multi, k, p0);
    inspect(protocol, p0);
  }
  c.require(worst <= 1e-10, "S_i = dS - Q/T");
  c.note(fmt::format("protocols={} trajectories={} max|S_i-(dS-Q/T)|={}", 2 * kBalancedInstances, trajectories,
                     num(worst)));
  return {4, "Thermal decomposition", c.passed, c.detail, elapsed_since(start)};
}

CriterionResult criterion_gift(std::uint64_t, unsigned) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  for (double eps : {0.0, 0.1, 0.3}) {
    const auto joint = measure_bit(Distribution::uniform(2), eps);
    const auto report = gift_enumerate(joint, FeedbackRule::reset());
    const double ift = report.mean_exp_minus_entropy_production;
    const double gap = report.mean_delta_s_bits - report.mean_delta_i_bits;
    c.require(std::abs(ift - 1.0) <= 1e-10, fmt::format("GIFT eps={}", eps));
    c.require(gap >= -1e-12, fmt::format("<dS> >= <dI> eps={}", eps));
    if (eps == 0.0) c.require(std::abs(gap) <= 1e-12, "equality at eps=0");
    c.note(fmt::format("eps={} <exp(-S_i)>={} <dS>={} <dI>={} bits", num(eps), num(ift),
                       num(report.mean_delta_s_bits), num(report.mean_delta_i_bits)));
  }
  return {5, "Generalized IFT for the error-prone reset demon", c.passed, c.detail, elapsed_since(start)};
}

CriterionResult criterion_landauer(std::uint64_t, unsigned) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const double cost = landauer_cost(0.5, 300.0, units::UnitSystem::si);
  c.require(std::abs(cost / 2.871e-21 - 1.0) <= 1e-3, "landauer(0.5, 300 K) = 2.871e-21 J");
  const double bound = szilard_work_bound(300.0, units::UnitSystem::si);
  c.require(std::abs(cost - bound) <= 1e-12 * bound, "equality at p = 0.5");
  double largest_other = 0.0;
  for (int k = 1; k < 100; ++k) {
    if (k == 50) continue;
    const double p = k / 100.0;
    const double other = landauer_cost(p, 300.0, units::UnitSystem::si);
    c.require(other < bound, fmt::format("strict inequality at p={}", p));
    largest_other = std::max(largest_other, other / bound);
  }
  c.note(fmt::format("landauer(0.5,300K)={} J szilard(300K)={} J max ratio off p=0.5: {}", num(cost), num(bound),
                     num(largest_other)));
  return {6, "Landauer and Szilard anchors", c.passed, c.detail, elapsed_since(start)};
}

Unitary2 random_unitary(RandomStream& rng) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double theta = std::acos(std::sqrt(rng.uniform()));
  const Complex a = std::polar(std::cos(theta), two_pi * rng.uniform());
  const Complex b = std::polar(std::sin(theta), two_pi * rng.uniform());
  const Complex g = std::polar(1.0, two_pi * rng.uniform());
  return Unitary2(Unitary2::Matrix{{{g * a, -g * std::conj(b)}, {g * b, g * std::conj(a)}}});
}

CriterionResult criterion_measurement_entropy(std::uint64_t seed, unsigned) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t base = derive_seed(seed, 700);
  constexpr std::size_t kTriples = 200;
  double worst = 0.0;
  std::size_t incoherent = 0;
  for (std::size_t k = 0; k < kTriples; ++k) {
    RandomStream rng(base, k);
    const Unitary2 v = random_unitary(rng);
    const MeasurementBasis basis(PureState::normalized(v(0, 0), v(1, 0)), PureState::normalized(v(0, 1), v(1, 1)));
    const std::size_t start_index = rng.uniform() < 0.5 ? 0 : 1;
    // Every fourth triple uses a unitary that maps the basis onto itself.
    Unitary2 u = random_unitary(rng);
    if (k % 4 == 0) {
      const double two_pi = 2.0 * std::numbers::pi;
      const Complex e0 = std::polar(1.0, two_pi * rng.uniform());
      const Complex e1 = std::polar(1.0, two_pi * rng.uniform());
      const bool swap = rng.uniform() < 0.5;
      const Unitary2 inner(swap ? Unitary2::Matrix{{{0.0, e1}, {e0, 0.0}}}
                                : Unitary2::Matrix{{{e0, 0.0}, {0.0, e1}}});
      u = v * inner * v.adjoint();
    }
    const auto report = entropy_production_protocol(basis[start_index], u, basis);
    worst = std::max(worst, std::abs(report.mean_entropy_production - report.delta_von_neumann));
    const auto p = basis.probabilities(u.apply(basis[start_index]));
    const bool coherent = p[0] * p[1] > 1e-14;
    incoherent += coherent ? 0 : 1;
    if (coherent) {
      c.require(report.mean_entropy_production > 1e-12, fmt::format("triple {} positive", k));
    } else {
      c.require(std::abs(report.mean_entropy_production) <= 1e-10, fmt::format("triple {} zero", k));
    }
  }
  c.require(worst <= 1e-10, "<S_i> = dS_VN");
  c.require(incoherent > 0, "zero case exercised");
  c.note(fmt::format("triples={} incoherent={} max|<S_i>-dS_VN|={}", kTriples, incoherent, num(worst)));
  return {7, "Measurement entropy production equals von Neumann entropy change", c.passed, c.detail,
          elapsed_since(start)};
}

CriterionResult criterion_engine(std::uint64_t seed, unsigned workers) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  EngineConfig config;
  config.omega0 = 1.0;
  config.omega_rabi = 1.0;
  config.memory_temperature = 0.1;
  constexpr std::size_t kPoints = 20;
  const double first = 0.01;
  const double last = std::numbers::pi / 2;
  std::vector<double> grid(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    grid[i] = i + 1 == kPoints ? last : first + (last - first) * static_cast<double>(i) / (kPoints - 1);
  }
  const auto sweep = zeno_sweep(config, grid, workers);
  double worst_closure = 0.0;
  std::size_t best_power = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    worst_closure = std::max(worst_closure, std::abs(sweep[i].work - sweep[i].quantum_heat));
    if (i > 0) c.require(sweep[i - 1].eta > sweep[i].eta, fmt::format("eta rises as omega*tau falls at {}", i));
    if (sweep[i].power > sweep[best_power].power) best_power = i;
  }
  c.require(worst_closure <= 1e-10, "<W> = <Q_q>");
  c.require(sweep.front().eta > 0.99, "eta > 0.99 at omega*tau = 0.01");
  c.require(best_power == 0, "power maximal at smallest omega*tau");
  c.note(fmt::format("max|W-Qq|={} eta(0.01)={} eta(pi/2)={} power(0.01)={} power(pi/2)={}", num(worst_closure),
                     num(sweep.front().eta), num(sweep.back().eta), num(sweep.front().power),
                     num(sweep.back().power)));

  for (double angle : {first, last}) {
    EngineConfig point = config;
    point.tau = angle / config.omega_rabi;
    point.n_cycles = kMonteCarloSamples;
    point.seed = derive_seed(seed, 800);
    const auto exact = exact_engine_performance(point);
    const auto mc = run_engine(point, workers);
    const double p = exact.outcome_minus_fraction;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(point.n_cycles));
    c.require(std::abs(mc.outcome_minus_fraction - p) <= 4.0 * sigma,
              fmt::format("P(-) within 4 sigma at {}", num(angle)));
    // Per-cycle W, Q_q and W_L do not fluctuate, so sigma is zero: summation rounding only.
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    c.require(same(mc.mean_work, exact.mean_work) && same(mc.mean_quantum_heat, exact.mean_quantum_heat) &&
                  same(mc.mean_landauer, exact.mean_landauer),
              fmt::format("deterministic means at {}", num(angle)));
    c.note(fmt::format("mc@{} P(-)={} exact={} sigma={}", num(angle), num(mc.outcome_minus_fraction), num(p),
                       num(sigma)));
  }
  const double seconds = elapsed_since(start);
  c.require(seconds < 30.0, "runtime < 30 s");
  return {8, "Measurement engine in the Zeno regime", c.passed, c.detail, seconds};
}

CriterionResult criterion_gate(std::uint64_t, unsigned workers) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const double theta = std::numbers::pi / 2;
  GateOptions options;
  options.workers = workers;
  constexpr std::array<double, 4> photons = {25.0, 100.0, 400.0, 1600.0};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::string trail;
  for (double n : photons) {
    const double infidelity = 1.0 - gate_fidelity(theta, n, 1.0, options).fidelity;
    const double x = std::log(n);
    const double y = std::log(infidelity);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    trail += fmt::format(" 1-F({})={}", n, num(infidelity));
  }
  const double m = static_cast<double>(photons.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  c.require(std::abs(slope + 1.0) <= 0.2, "slope -1 +- 0.2");

  const double threshold = gate_fidelity(theta, 1000.0, 1.0, options).fidelity;
  const auto n_star = min_photons_for_fidelity(threshold, 1.0, theta, workers);
  c.require(n_star >= 300 && n_star <= 3000, "n* in [300, 3000]");

  const double energy = gate_energy_cost(1000.0, 6e9);
  const double landauer = landauer_cost(0.5, 300.0, units::UnitSystem::si);
  c.require(std::abs(energy / 3.97e-21 - 1.0) <= 5e-3, "E(1000, 6 GHz) = 3.97e-21 J");
  c.require(std::floor(std::log10(energy)) == -21.0 && std::floor(std::log10(landauer)) == -21.0,
            "same decimal order as 1e-21 J and the Landauer cost");
  c.note(fmt::format("slope={}{} threshold F(1000)={} n*={} E={} J landauer={} J", num(slope), trail, num(threshold),
                     n_star, num(energy), num(landauer)));
  const double seconds = elapsed_since(start);
  c.require(seconds < 120.0, "runtime < 2 min");
  return {9, "Gate energetics", c.passed, c.detail, seconds};
}

using CriterionFn = CriterionResult (*)(std::uint64_t, unsigned);

constexpr std::array<CriterionFn, 9> kCriteria = {
    criterion_ift,     criterion_jarzynski,           criterion_two_point_forms,
    criterion_thermal_decomposition, criterion_gift, criterion_landauer,
    criterion_measurement_entropy,   criterion_engine, criterion_gate,
};

CriterionResult guarded(int id, std::uint64_t seed, unsigned workers) {
  try {
    return kCriteria[static_cast<std::size_t>(id - 1)](seed, workers);
  } catch (const std::exception& e) {
    return {id, fmt::format("criterion {}", id), false, std::string("FAILED[exception] ") + e.what(), 0.0};
  }
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed, unsigned workers) {
  if (id < 1 || id > static_cast<int>(kCriteria.size())) {
    throw ConfigError(fmt::format("criterion id {} outside 1..{}", id, kCriteria.size()));
  }
  return guarded(id, seed, workers);
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, unsigned workers) {
  workers = std::max(1u, workers);
  std::vector<CriterionResult> results;
  for (int id = 1; id <= static_cast<int>(kCriteria.size()); ++id) results.push_back(guarded(id, seed, workers));

  const auto start = std::chrono::steady_clock::now();
  const unsigned other = workers == 1 ? 4 : 1;
  Check c;
  std::string differing;
  for (int id = 1; id <= static_cast<int>(kCriteria.size()); ++id) {
    const auto again = guarded(id, seed, other);
    const auto& first = results[static_cast<std::size_t>(id - 1)];
    if (again.detail != first.detail || again.passed != first.passed) {
      differing += fmt::format(" {}", id);
    }
  }
  c.require(differing.empty(), "identical details");
  c.note(differing.empty() ? std::string("criteria 1-9 identical across worker counts")
                           : "differences in criteria" + differing);
  results.push_back({10, "Determinism across worker counts", c.passed, c.detail, elapsed_since(start)});
  return results;
}

}  // namespace qthermo
