#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/estimators.hpp"

namespace {

using namespace qthermo;

oracle::RawProtocol raw_quench() {
  return {{0.0, 0.0}, {{{0.0, 1.0}, {}}}, 1.0};
}

// Random protocol: alternating drives and kernels, each kernel either lazy Metropolis or a dense
// random column-stochastic matrix.
oracle::RawProtocol random_protocol(std::mt19937_64& rng, std::size_t n, std::size_t baths) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  oracle::RawProtocol raw;
  raw.temperature = 0.4 + 1.5 * u(rng);
  for (std::size_t i = 0; i < n; ++i) raw.energies.push_back(2.0 * u(rng) - 1.0);
  std::vector<double> e = raw.energies;
  for (std::size_t k = 0; k < baths; ++k) {
    for (auto& x : e) x += u(rng) - 0.5;
    raw.steps.push_back({e, {}});
    if (u(rng) < 0.5) {
      raw.steps.push_back({{}, oracle::lazy_metropolis(e, raw.temperature)});
    } else {
      oracle::Rows rows(n, std::vector<double>(n));
      for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += rows[i][j] = 0.05 + u(rng);
        for (std::size_t i = 0; i < n; ++i) rows[i][j] /= sum;
      }
      raw.steps.push_back({{}, rows});
    }
  }
  return raw;
}

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) s += x = u(rng);
  for (auto& x : p) x /= s;
  return p;
}

TEST(Enumeration, EquilibriumIsExactlyReversible) {
  const std::vector<double> e{0.0, 0.5, 1.0};
  const EnergyLandscape land(e);
  const Protocol p(land, {BathStep{metropolis_kernel(land, 1.0)}, BathStep{metropolis_kernel(land, 1.0)}}, 1.0);
  const auto report = enumerate_exact(p, boltzmann_distribution(land, 1.0));
  EXPECT_NEAR(report.mean_entropy_production, 0.0, 1e-15);
  EXPECT_NEAR(report.mean_exp_minus_entropy_production, 1.0, 1e-15);
}

TEST(Enumeration, QuenchJarzynskiAverage) {
  const auto p = oracle::to_library(raw_quench());
  const auto report = enumerate_exact(p, boltzmann_distribution(p.initial_landscape(), 1.0),
                                      BackwardBoundary::final_equilibrium);
  EXPECT_NEAR(report.mean_exp_minus_work_over_t, 0.5 + 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(report.mean_exp_minus_work_over_t, 0.6839, 1e-4);
  const double delta_f = free_energy(p.final_landscape(), 1.0) - free_energy(p.initial_landscape(), 1.0);
  EXPECT_NEAR(report.mean_exp_minus_work_over_t, std::exp(-delta_f), 1e-12);
  const auto verdict = second_law_check(report);
  EXPECT_TRUE(verdict.holds);
  EXPECT_NEAR(verdict.margin, 0.5 * 0.6201 + 0.5 * (-0.3799), 1e-4);
}

TEST(Enumeration, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t baths = 1 + trial % 5;
    const auto raw = random_protocol(rng, n, baths);
    const auto p0 = random_distribution(rng, n);
    const auto p = oracle::to_library(raw);
    for (bool final_eq : {false, true}) {
      const auto boundary = final_eq ? BackwardBoundary::final_equilibrium : BackwardBoundary::pushforward;
      const auto report = enumerate_exact(p, Distribution(p0), boundary);
      const auto ref = oracle::brute_force(raw, p0, final_eq);
      EXPECT_EQ(report.rows.size(), ref.rows);
      EXPECT_NEAR(report.mean_work, ref.mean_work, 1e-12);
      EXPECT_NEAR(report.mean_heat, ref.mean_heat, 1e-12);
      EXPECT_NEAR(report.mean_exp_minus_work_over_t, ref.mean_exp_minus_w, 1e-12);
      EXPECT_NEAR(report.mean_exp_minus_entropy_production, ref.mean_exp_minus_sigma, 1e-12);
      EXPECT_NEAR(report.mean_entropy_production, ref.mean_sigma, 1e-12);
      if (!final_eq) {
        EXPECT_NEAR(report.mean_exp_minus_entropy_production, 1.0, 1e-10);
      }
    }
  }
}

TEST(Enumeration, JensenAndSaturation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto raw = random_protocol(rng, 3, 1 + trial % 3);
    const auto report = enumerate_exact(oracle::to_library(raw), Distribution(random_distribution(rng, 3)));
    EXPECT_LE(std::exp(-report.mean_entropy_production), report.mean_exp_minus_entropy_production + 1e-12);
  }
  // Saturated case: equilibrium start and matching kernels.
  const EnergyLandscape land({0.0, 0.3, 0.9});
  const Protocol p(land, {BathStep{metropolis_kernel(land, 0.5)}}, 0.5);
  const auto report = enumerate_exact(p, boltzmann_distribution(land, 0.5));
  ASSERT_NEAR(report.mean_entropy_production, 0.0, 1e-14);
  for (const auto& row : report.rows)
    if (row.probability > 0.0) {
      EXPECT_NEAR(row.ledger->entropy_production, 0.0, 1e-12);
    }
}

TEST(Enumeration, RowCountAndCapacity) {
  const auto p = linear_ramp_protocol(EnergyLandscape({0, 0, 0, 0}), EnergyLandscape({0, 1, 2, 3}), 12, 1.0);
  EXPECT_EQ(enumeration_row_count(p), std::uint64_t{1} << 26);
  try {
    enumerate_exact(p, Distribution::uniform(4));
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("67108864"), std::string::npos);
  }
}

TEST(Enumeration, QuasiStaticLimit) {
  const EnergyLandscape from({0.0, 0.0});
  const EnergyLandscape to({0.0, 1.0});
  const double delta_f = free_energy(to, 1.0) - free_energy(from, 1.0);
  const auto init = boltzmann_distribution(from, 1.0);
  double previous = INFINITY;
  for (std::size_t k : {1u, 2u, 5u, 10u, 20u, 50u}) {
    const auto p = linear_ramp_protocol(from, to, k, 1.0);
    const auto avg = marginal_averages(p, init);
    const double dissipation = avg.mean_work - delta_f;
    EXPECT_GT(dissipation, 0.0);
    EXPECT_LT(dissipation, previous);
    previous = dissipation;
    if (k <= 10) {
      const auto report = enumerate_exact(p, init);
      EXPECT_NEAR(report.mean_work, avg.mean_work, 1e-12);
      EXPECT_NEAR(report.mean_heat, avg.mean_heat, 1e-12);
    }
  }
  EXPECT_LT(previous, 0.01);
}

TEST(Ift, EquilibriumMeanIsExactlyOne) {
  const EnergyLandscape land({0.0, 0.2, 0.6, 1.0});
  const Protocol p(land, {BathStep{metropolis_kernel(land, 1.0)}, BathStep{metropolis_kernel(land, 1.0)}}, 1.0);
  const auto r = ift_estimate(p, boltzmann_distribution(land, 1.0), 5000, 1);
  EXPECT_NEAR(r.mean, 1.0, 1e-14);
  EXPECT_NEAR(r.std_error, 0.0, 1e-14);
  EXPECT_EQ(r.n_samples, 5000u);
}

TEST(Ift, QuenchWithinThreeSigma) {
  // Quench followed by relaxation: the pushforward boundary makes a bare quench trivially
  // reversible, so the bath step is what gives the estimator something to average.
  auto raw = raw_quench();
  raw.steps.push_back({{}, oracle::lazy_metropolis({0.0, 1.0}, 1.0)});
  const auto p = oracle::to_library(raw);
  const auto r = ift_estimate(p, boltzmann_distribution(p.initial_landscape(), 1.0), 100000, 0);
  EXPECT_GT(r.std_error, 0.0);
  EXPECT_LE(std::abs(r.mean - 1.0), 3.0 * r.std_error);
  EXPECT_EQ(r.verdict(1.0), "equal");
}

TEST(Ift, AbsorbingStateFlagsIrreversibility) {
  // State 1 absorbs: a jump 0 -> 1 has no reverse.
  const Protocol p(EnergyLandscape({0.0, 0.0}), {BathStep{TransitionKernel({{0.5, 0.0}, {0.5, 1.0}})}}, 1.0);
  const Distribution init({1.0, 0.0});
  const auto exact = enumerate_exact(p, init);
  EXPECT_NEAR(exact.absolute_irreversibility_mass, 0.5, 1e-15);
  EXPECT_LT(exact.mean_exp_minus_entropy_production, 1.0);
  const auto r = ift_estimate(p, init, 20000, 4);
  EXPECT_LT(r.mean, 1.0);
  EXPECT_GT(r.absolute_irreversibility_fraction, 0.0);
  EXPECT_NEAR(r.absolute_irreversibility_fraction, 0.5, 0.02);
  EXPECT_EQ(r.verdict(1.0), "le-expected");
}

TEST(Ift, OracleEquivalenceOnRandomProtocols) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto raw = random_protocol(rng, n, 1 + trial % 5);
    const auto p0 = random_distribution(rng, n);
    const auto ref = oracle::brute_force(raw, p0, false);
    const auto r = ift_estimate(oracle::to_library(raw), Distribution(p0), 40000, 100 + trial);
    EXPECT_LE(std::abs(r.mean - ref.mean_exp_minus_sigma), 4.0 * r.std_error) << "trial " << trial;
  }
}

TEST(Ift, DeterministicAcrossRunsAndWorkers) {
  const auto p = linear_ramp_protocol(EnergyLandscape({0, 0, 0}), EnergyLandscape({0, 1, 0.5}), 4, 0.7);
  const auto init = Distribution({0.6, 0.3, 0.1});
  const auto a = ift_estimate(p, init, 30000, 9, 1);
  const auto b = ift_estimate(p, init, 30000, 9, 1);
  const auto c = ift_estimate(p, init, 30000, 9, 3);
  for (const auto& other : {b, c}) {
    EXPECT_EQ(a.mean, other.mean);
    EXPECT_EQ(a.std_error, other.std_error);
    EXPECT_EQ(a.absolute_irreversibility_fraction, other.absolute_irreversibility_fraction);
  }
  const auto d = ift_estimate(p, init, 30000, 10, 1);
  EXPECT_NE(a.mean, d.mean);
}

TEST(Jarzynski, QuenchTargetWithinThreeSigma) {
  const auto p = oracle::to_library(raw_quench());
  const auto r = jarzynski_estimate(p, 1.0, 100000, 3);
  EXPECT_NEAR(r.target, 0.6839, 1e-4);
  EXPECT_LE(std::abs(r.estimate.mean - r.target), 3.0 * r.estimate.std_error);
}

TEST(Jarzynski, ZeroDriveGivesOne) {
  const EnergyLandscape land({0.0, 1.0});
  const Protocol p(land, {BathStep{metropolis_kernel(land, 1.0)}}, 1.0);
  const auto r = jarzynski_estimate(p, 1.0, 1000, 0);
  EXPECT_DOUBLE_EQ(r.target, 1.0);
  EXPECT_DOUBLE_EQ(r.estimate.mean, 1.0);
}

TEST(Jarzynski, RejectsNonEquilibriumStart) {
  const auto p = oracle::to_library(raw_quench());
  EXPECT_THROW(jarzynski_estimate(p, Distribution({0.9, 0.1}), 1.0, 100, 0), ConfigError);
}

TEST(SecondLaw, EquilibriumAndRelaxation) {
  const EnergyLandscape land({0.0, 1.0});
  const Protocol p(land, {BathStep{metropolis_kernel(land, 1.0)}}, 1.0);
  EXPECT_NEAR(second_law_check(enumerate_exact(p, boltzmann_distribution(land, 1.0))).margin, 0.0, 1e-15);

  const Distribution start({1.0, 0.0});
  const auto eq = boltzmann_distribution(land, 1.0);
  const auto after = evolve_distribution(p, start).back();
  const auto verdict = second_law_check(enumerate_exact(p, start));
  EXPECT_TRUE(verdict.holds);
  EXPECT_GT(verdict.margin, 0.0);
  EXPECT_NEAR(verdict.margin, kl_to_equilibrium(start, eq) - kl_to_equilibrium(after, eq), 1e-12);
}

TEST(Summary, BatchMeans) {
  std::vector<double> values(64);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = double(i % 2);
  const auto r = summarize_samples(values, 0);
  EXPECT_DOUBLE_EQ(r.mean, 0.5);
  EXPECT_DOUBLE_EQ(r.std_error, 0.0);  // every batch holds one 0 and one 1
  const std::vector<double> one{3.0};
  EXPECT_DOUBLE_EQ(summarize_samples(one, 0).mean, 3.0);
}

}  // namespace
