#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/estimators.hpp"
#include "qthermo/stochastic.hpp"

namespace {

using namespace qthermo;

const double kLn2 = std::numbers::ln2;
const double kQuenchDeltaF = kLn2 - std::log(1.0 + std::exp(-1.0));

Protocol quench() {
  return Protocol(EnergyLandscape({0.0, 0.0}), {DriveStep{EnergyLandscape({0.0, 1.0})}}, 1.0);
}

Protocol single_bath(const std::vector<double>& energies, double t) {
  const EnergyLandscape e(energies);
  return Protocol(e, {BathStep{metropolis_kernel(e, t)}}, t);
}

// Random detailed-balance kernel: symmetric rates scaled by the Metropolis-type factor.
TransitionKernel random_balanced_kernel(const std::vector<double>& e, double t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const std::size_t n = e.size();
  std::vector<std::vector<double>> sym(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sym[i][j] = sym[j][i] = u(rng);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double leave = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      rows[i][j] = sym[i][j] / double(n) * std::min(1.0, std::exp(-(e[i] - e[j]) / t));
      leave += rows[i][j];
    }
    rows[j][j] = 1.0 - leave;
  }
  return TransitionKernel(rows);
}

TEST(Boltzmann, DegenerateLevelsAreUniform) {
  const auto p = boltzmann_distribution(EnergyLandscape({0.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Boltzmann, TwoLevelValues) {
  const auto p = boltzmann_distribution(EnergyLandscape({0.0, 1.0}), 1.0);
  EXPECT_NEAR(p[0], 0.7311, 1e-4);
  EXPECT_NEAR(p[1], 0.2689, 1e-4);
  EXPECT_NEAR(p[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(Boltzmann, HighTemperatureLimit) {
  const auto p = boltzmann_distribution(EnergyLandscape({0.0, 1.0}), 1e6);
  EXPECT_NEAR(p[0], 0.5, 1e-6);
  EXPECT_NEAR(p[1], 0.5, 1e-6);
}

TEST(Boltzmann, LargeEnergiesDoNotOverflow) {
  const auto p = boltzmann_distribution(EnergyLandscape({-800.0, 0.0, 800.0}), 1.0);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_EQ(p[2], 0.0);
}

TEST(Boltzmann, RejectsNonPositiveTemperature) {
  EXPECT_THROW(boltzmann_distribution(EnergyLandscape({0.0, 1.0}), 0.0), DomainError);
  EXPECT_THROW(boltzmann_distribution(EnergyLandscape({0.0, 1.0}), -1.0), DomainError);
}

TEST(FreeEnergy, Values) {
  EXPECT_NEAR(free_energy(EnergyLandscape({0.0, 0.0}), 1.0), -kLn2, 1e-15);
  EXPECT_NEAR(free_energy(EnergyLandscape({0.0, 1.0}), 1.0), -0.3133, 1e-4);
  EXPECT_NEAR(free_energy(EnergyLandscape({0.0, 1.0}), 1.0), -std::log(1.0 + std::exp(-1.0)), 1e-15);
  for (double t : {0.3, 1.0, 7.0}) {
    EXPECT_NEAR(free_energy(EnergyLandscape({2.5, 2.5}), t), 2.5 - t * kLn2, 1e-12);
  }
  EXPECT_THROW(free_energy(EnergyLandscape({0.0, 1.0}), 0.0), DomainError);
}

TEST(Metropolis, TwoLevelEntries) {
  const auto k = metropolis_kernel(EnergyLandscape({0.0, 1.0}), 1.0);
  EXPECT_NEAR(k(1, 0), 0.1839, 1e-4);
  EXPECT_NEAR(k(1, 0), 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(k(0, 1), 0.5);
  EXPECT_NEAR(k(0, 0) + k(1, 0), 1.0, 1e-15);
}

TEST(Metropolis, FlatLandscapeAcceptsEveryProposal) {
  // Lazy kernel: the move probability 1/2 spreads evenly over the other n - 1 states.
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto k = metropolis_kernel(EnergyLandscape(std::vector<double>(n, 0.0)), 1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_NEAR(k(i, j), i == j ? 0.5 : 0.5 / double(n - 1), 1e-15);
  }
}

TEST(Metropolis, DetailedBalanceProduct) {
  const EnergyLandscape e({0.0, 1.0});
  const auto k = metropolis_kernel(e, 1.0);
  const auto p = boltzmann_distribution(e, 1.0);
  EXPECT_NEAR(p[0] * k(1, 0), 0.1345, 1e-4);
  EXPECT_NEAR(p[0] * k(1, 0), p[1] * k(0, 1), 1e-15);
  EXPECT_TRUE(k.satisfies_detailed_balance(p));
}

TEST(Metropolis, MatchesIndependentConstruction) {
  const std::vector<double> e{0.3, -1.2, 0.8, 2.0};
  const auto k = metropolis_kernel(EnergyLandscape(e), 0.7);
  const auto ref = oracle::lazy_metropolis(e, 0.7);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) EXPECT_NEAR(k(i, j), ref[i][j], 1e-15);
}

TEST(Kernel, RejectsNonStochasticColumns) {
  EXPECT_THROW(TransitionKernel({{0.5, 0.5}, {0.4, 0.5}}), ConfigError);
  EXPECT_THROW(TransitionKernel({{1.2, 0.0}, {-0.2, 1.0}}), ConfigError);
  EXPECT_THROW(TransitionKernel({{1.0, 0.0}}), ConfigError);
}

TEST(Kernel, CompositionStaysStochastic) {
  std::mt19937_64 rng(11);
  const std::vector<double> e{0.0, 0.4, 1.3};
  const auto a = random_balanced_kernel(e, 1.0, rng);
  const auto b = metropolis_kernel(EnergyLandscape({1.0, 0.0, 2.0}), 0.5);
  const auto c = compose(b, a);
  for (std::size_t j = 0; j < 3; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      double expected = 0.0;
      for (std::size_t m = 0; m < 3; ++m) expected += b(i, m) * a(m, j);
      EXPECT_NEAR(c(i, j), expected, 1e-15);
      sum += c(i, j);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Protocol, Validation) {
  const EnergyLandscape two({0.0, 1.0});
  EXPECT_THROW(Protocol(two, {DriveStep{EnergyLandscape({0.0, 1.0, 2.0})}}, 1.0), ConfigError);
  EXPECT_THROW(Protocol(two, {BathStep{TransitionKernel::identity(3)}}, 1.0), ConfigError);
  EXPECT_THROW(Protocol(two, {}, 1.0), ConfigError);
  EXPECT_THROW(Protocol(two, {BathStep{TransitionKernel::identity(2)}}, 0.0), ConfigError);
}

TEST(Sampling, NoBathStepsKeepsOnlyInitialState) {
  const auto t = sample_trajectory(quench(), Distribution::point_mass(2, 1), 5);
  ASSERT_EQ(t.states.size(), 1u);
  EXPECT_EQ(t.states[0], 1u);
}

TEST(Sampling, IdentityKernelFreezesState) {
  const Protocol p(EnergyLandscape({0.0, 1.0, 2.0}), {BathStep{TransitionKernel::identity(3)}}, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = sample_trajectory(p, Distribution::point_mass(3, 2), seed);
    EXPECT_EQ(t.states, (std::vector<std::size_t>{2, 2}));
  }
}

TEST(Sampling, DeterministicSwap) {
  const Protocol p(EnergyLandscape({0.0, 1.0}), {BathStep{TransitionKernel({{0.0, 1.0}, {1.0, 0.0}})}}, 1.0);
  const auto report = enumerate_exact(p, Distribution::point_mass(2, 0));
  for (const auto& row : report.rows) {
    const bool swap = row.trajectory.states == std::vector<std::size_t>{0, 1};
    EXPECT_DOUBLE_EQ(row.probability, swap ? 1.0 : 0.0);
  }
  EXPECT_EQ(sample_trajectory(p, Distribution::point_mass(2, 0), 3).states, (std::vector<std::size_t>{0, 1}));
}

TEST(Sampling, SameSeedSameTrajectory) {
  const auto p = linear_ramp_protocol(EnergyLandscape({0.0, 0.0, 0.0}), EnergyLandscape({0.0, 1.0, 2.0}), 6, 1.0);
  const auto init = Distribution::uniform(3);
  EXPECT_EQ(sample_trajectory(p, init, 42), sample_trajectory(p, init, 42));
}

TEST(Sampling, FrequenciesFollowKernel) {
  const auto p = single_bath({0.0, 1.0}, 1.0);
  const int n = 200000;
  int jumps = 0;
  for (int i = 0; i < n; ++i) {
    RandomStream stream(9, static_cast<std::uint64_t>(i));
    if (sample_trajectory(p, Distribution::point_mass(2, 0), stream).states[1] == 1) ++jumps;
  }
  const double q = 0.5 * std::exp(-1.0);
  EXPECT_NEAR(double(jumps) / n, q, 4.0 * std::sqrt(q * (1 - q) / n));
}

TEST(Ledger, QuenchUpperState) {
  const auto p = quench();
  const auto p0 = boltzmann_distribution(p.initial_landscape(), 1.0);
  const auto p1 = backward_boundary(p, p0, BackwardBoundary::final_equilibrium);
  const auto l = ledger(p, Trajectory{{1}}, p0, p1);
  EXPECT_DOUBLE_EQ(l.work, 1.0);
  EXPECT_DOUBLE_EQ(l.heat, 0.0);
  EXPECT_NEAR(kQuenchDeltaF, 0.3799, 1e-4);
  EXPECT_NEAR(l.entropy_production, 1.0 - kQuenchDeltaF, 1e-12);
  EXPECT_NEAR(l.entropy_production, 0.6201, 1e-4);
}

TEST(Ledger, QuenchLowerStateIsNegative) {
  const auto p = quench();
  const auto p0 = boltzmann_distribution(p.initial_landscape(), 1.0);
  const auto p1 = backward_boundary(p, p0, BackwardBoundary::final_equilibrium);
  const auto l = ledger(p, Trajectory{{0}}, p0, p1);
  EXPECT_DOUBLE_EQ(l.work, 0.0);
  EXPECT_NEAR(l.entropy_production, -kQuenchDeltaF, 1e-12);
  EXPECT_NEAR(l.entropy_production, -0.3799, 1e-4);
}

TEST(Ledger, EquilibriumBathIsReversible) {
  const std::vector<double> e{0.0, 0.7, 1.9};
  const auto p = single_bath(e, 0.8);
  const auto eq = boltzmann_distribution(EnergyLandscape(e), 0.8);
  const auto report = enumerate_exact(p, eq);
  for (const auto& row : report.rows) {
    ASSERT_TRUE(row.ledger);
    EXPECT_NEAR(row.ledger->entropy_production, 0.0, 1e-12);
    EXPECT_NEAR(entropy_production_relative_form(eq, eq, eq, row.trajectory.states[0], row.trajectory.states[1]),
                0.0, 1e-12);
  }
}

TEST(Ledger, LengthMismatchIsConfigError) {
  const auto p = single_bath({0.0, 1.0}, 1.0);
  const auto d = Distribution::uniform(2);
  EXPECT_THROW(ledger(p, Trajectory{{0}}, d, d), ConfigError);
  EXPECT_THROW(ledger(p, Trajectory{{0, 1, 0}}, d, d), ConfigError);
}

TEST(Ledger, FirstLawOnSampledTrajectories) {
  std::mt19937_64 rng(3);
  std::vector<ProtocolStep> steps;
  std::vector<double> e{0.0, 0.5, 1.5};
  for (int k = 0; k < 4; ++k) {
    e = {e[0] + 0.2, e[1] - 0.3, e[2] + 0.1 * k};
    steps.emplace_back(DriveStep{EnergyLandscape(e)});
    steps.emplace_back(BathStep{random_balanced_kernel(e, 1.0, rng)});
  }
  const Protocol p(EnergyLandscape({0.0, 0.5, 1.5}), steps, 1.0);
  const auto p0 = Distribution({0.2, 0.5, 0.3});
  const auto p1 = backward_boundary(p, p0, BackwardBoundary::pushforward);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto t = sample_trajectory(p, p0, seed);
    const auto l = ledger(p, t, p0, p1);
    EXPECT_NEAR(l.work + l.heat, l.delta_energy, 1e-10);
    // Thermal decomposition for detailed-balance kernels.
    EXPECT_NEAR(l.entropy_production, l.delta_stochastic_entropy - l.heat / p.temperature(), 1e-10);
  }
}

TEST(Evolve, IdentityAndStationarity) {
  const Protocol ident(EnergyLandscape({0.0, 1.0}), {BathStep{TransitionKernel::identity(2)}}, 1.0);
  const auto m = evolve_distribution(ident, Distribution({0.3, 0.7}));
  EXPECT_DOUBLE_EQ(m.back()[0], 0.3);

  const std::vector<double> e{0.0, 0.4, 2.0, -0.5};
  const auto eq = boltzmann_distribution(EnergyLandscape(e), 1.3);
  const auto after = evolve_distribution(single_bath(e, 1.3), eq).back();
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(after[i], eq[i], 1e-12);
}

TEST(Evolve, OneStepFromGround) {
  const auto after = evolve_distribution(single_bath({0.0, 1.0}, 1.0), Distribution({1.0, 0.0})).back();
  EXPECT_NEAR(after[0], 0.8161, 1e-4);
  EXPECT_NEAR(after[1], 0.1839, 1e-4);
}

TEST(KlDivergence, Values) {
  const auto half = Distribution::uniform(2);
  EXPECT_DOUBLE_EQ(kl_to_equilibrium(half, half), 0.0);
  EXPECT_NEAR(kl_to_equilibrium(Distribution({1.0, 0.0}), half), kLn2, 1e-15);
  const auto eq = boltzmann_distribution(EnergyLandscape({0.0, 1.0}), 1.0);
  const double brute = 0.9 * std::log(0.9 / eq[0]) + 0.1 * std::log(0.1 / eq[1]);
  const double d = kl_to_equilibrium(Distribution({0.9, 0.1}), eq);
  EXPECT_GE(d, 0.0);
  EXPECT_NEAR(d, brute, 1e-15);
  EXPECT_THROW(kl_to_equilibrium(Distribution({0.5, 0.5}), Distribution({1.0, 0.0})), DomainError);
}

TEST(KlDivergence, RelaxationAndAverageIdentity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 3;
    std::vector<double> e(n), w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = 3.0 * u(rng) - 1.0;
      w[i] = u(rng) + 1e-3;
      total += w[i];
    }
    for (auto& x : w) x /= total;
    const double t = 0.3 + 2.0 * u(rng);
    const auto kernel = trial % 2 == 0 ? metropolis_kernel(EnergyLandscape(e), t) : random_balanced_kernel(e, t, rng);
    const Protocol p(EnergyLandscape(e), {BathStep{kernel}}, t);
    const Distribution p0(w);
    const auto eq = boltzmann_distribution(EnergyLandscape(e), t);
    const auto p1 = evolve_distribution(p, p0).back();
    const double d0 = kl_to_equilibrium(p0, eq);
    const double d1 = kl_to_equilibrium(p1, eq);
    EXPECT_LE(d1, d0 + 1e-15);
    const auto report = enumerate_exact(p, p0);
    EXPECT_NEAR(report.mean_entropy_production, d0 - d1, 1e-10);
    for (const auto& row : report.rows) {
      if (!row.ledger) continue;
      EXPECT_NEAR(row.ledger->entropy_production,
                  entropy_production_relative_form(p0, p1, eq, row.trajectory.states[0], row.trajectory.states[1]),
                  1e-10);
    }
  }
}

TEST(Ramp, EndpointsAndLength) {
  const auto p = linear_ramp_protocol(EnergyLandscape({0.0, 0.0}), EnergyLandscape({0.0, 1.0}), 4, 1.0);
  EXPECT_EQ(p.bath_step_count(), 4u);
  EXPECT_EQ(p.steps().size(), 8u);
  EXPECT_DOUBLE_EQ(p.final_landscape()[1], 1.0);
  EXPECT_DOUBLE_EQ(std::get<DriveStep>(p.steps()[0]).landscape[1], 0.25);
}

}  // namespace
