#include "qthermo/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "qthermo/errors.hpp"
#include "qthermo/parallel.hpp"

namespace qthermo {
namespace {

constexpr std::uint64_t kMinSamples = 100;

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct Sample {
  double value = 0.0;
  bool irreversible = false;
};

template <class Draw>
EstimatorResult run_estimator(std::uint64_t n, unsigned workers, Draw&& draw) {
  if (n < kMinSamples) {
    throw ConfigError("estimators need at least " + std::to_string(kMinSamples) + " samples");
  }
  std::vector<double> values(n);
  std::vector<char> irreversible(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    const Sample s = draw(static_cast<std::uint64_t>(i));
    values[i] = s.value;
    irreversible[i] = s.irreversible ? 1 : 0;
  });
  std::uint64_t count = 0;
  for (char c : irreversible) count += static_cast<std::uint64_t>(c);
  return summarize_samples(values, count);
}

}  // namespace

std::string EstimatorResult::verdict(double target, double sigmas) const {
  if (absolute_irreversibility_fraction > 0.0) return "le-expected";
  return std::abs(mean - target) <= sigmas * std_error ? "equal" : "not-equal";
}

EstimatorResult summarize_samples(std::span<const double> values, std::uint64_t irreversible_count) {
  EstimatorResult out;
  out.n_samples = values.size();
  if (values.empty()) return out;
  const std::size_t batches = std::min<std::size_t>(kBatchCount, values.size());
  const std::size_t base = values.size() / batches;
  const std::size_t extra = values.size() % batches;

  std::vector<double> batch_means(batches);
  double total = 0.0;
  std::size_t offset = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    const double sum = pairwise_sum(values.subspan(offset, len));
    batch_means[b] = sum / static_cast<double>(len);
    total += sum;
    offset += len;
  }
  out.mean = total / static_cast<double>(values.size());
  if (batches > 1) {
    double ss = 0.0;
    for (double m : batch_means) ss += (m - out.mean) * (m - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(batches * (batches - 1)));
  }
  out.absolute_irreversibility_fraction =
      static_cast<double>(irreversible_count) / static_cast<double>(values.size());
  return out;
}

std::uint64_t enumeration_row_count(const Protocol& protocol) {
  const std::uint64_t n = protocol.state_count();
  std::uint64_t rows = 1;
  for (std::size_t k = 0; k < protocol.checkpoint_count(); ++k) {
    if (rows > std::numeric_limits<std::uint64_t>::max() / n) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    rows *= n;
  }
  return rows;
}

EnumerationReport enumerate_exact(const Protocol& protocol, const Distribution& initial,
                                  BackwardBoundary boundary) {
  const std::uint64_t rows = enumeration_row_count(protocol);
  if (rows > kEnumerationRowLimit) {
    const std::string count = rows == std::numeric_limits<std::uint64_t>::max()
                                  ? std::string("more than 1.8e19")
                                  : std::to_string(rows);
    throw CapacityError("enumeration needs " + count + " rows (" +
                        std::to_string(protocol.state_count()) + "^" +
                        std::to_string(protocol.checkpoint_count()) + "), limit is " +
                        std::to_string(kEnumerationRowLimit));
  }
  const Distribution p1 = backward_boundary(protocol, initial, boundary);
  std::vector<const TransitionKernel*> kernels;
  for (const auto& step : protocol.steps()) {
    if (const auto* bath = std::get_if<BathStep>(&step)) kernels.push_back(&bath->kernel);
  }

  const std::size_t n = protocol.state_count();
  const std::size_t length = protocol.checkpoint_count();
  EnumerationReport report;
  report.temperature = protocol.temperature();
  report.rows.reserve(static_cast<std::size_t>(rows));

  // Odometer over all state sequences, first checkpoint varying slowest.
  std::vector<std::size_t> digits(length, 0);
  for (std::uint64_t r = 0; r < rows; ++r) {
    double probability = initial[digits[0]];
    for (std::size_t k = 0; k + 1 < length && probability > 0.0; ++k) {
      probability *= (*kernels[k])(digits[k + 1], digits[k]);
    }
    EnumeratedTrajectory row{Trajectory{digits}, probability, std::nullopt};
    if (probability > 0.0) {
      const TrajectoryLedger l = ledger(protocol, row.trajectory, initial, p1);
      row.ledger = l;
      report.mean_work += probability * l.work;
      report.mean_heat += probability * l.heat;
      report.mean_exp_minus_work_over_t += probability * std::exp(-l.work / protocol.temperature());
      if (l.backward_probability_zero) {
        report.absolute_irreversibility_mass += probability;
        report.mean_entropy_production = std::numeric_limits<double>::infinity();
      } else {
        report.mean_entropy_production += probability * l.entropy_production;
        report.mean_exp_minus_entropy_production += probability * std::exp(-l.entropy_production);
      }
    }
    report.rows.push_back(std::move(row));
    for (std::size_t k = length; k-- > 0;) {
      if (++digits[k] < n) break;
      digits[k] = 0;
    }
  }
  return report;
}

EstimatorResult ift_estimate(const Protocol& protocol, const Distribution& initial,
                             std::uint64_t n, std::uint64_t seed, unsigned workers) {
  const Distribution p1 = evolve_distribution(protocol, initial).back();
  return run_estimator(n, workers, [&](std::uint64_t index) {
    RandomStream stream(seed, index);
    const Trajectory t = sample_trajectory(protocol, initial, stream);
    const TrajectoryLedger l = ledger(protocol, t, initial, p1);
    if (l.backward_probability_zero) return Sample{0.0, true};
    return Sample{std::exp(-l.entropy_production), false};
  });
}

JarzynskiResult jarzynski_estimate(const Protocol& protocol, double temperature, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers) {
  const Distribution initial = boltzmann_distribution(protocol.initial_landscape(), temperature);
  JarzynskiResult out;
  out.target = std::exp(-(free_energy(protocol.final_landscape(), temperature) -
                          free_energy(protocol.initial_landscape(), temperature)) /
                        temperature);
  out.estimate = run_estimator(n, workers, [&](std::uint64_t index) {
    RandomStream stream(seed, index);
    const Trajectory t = sample_trajectory(protocol, initial, stream);
    // Work depends only on the visited states, never on the backward boundary.
    const TrajectoryLedger l = ledger(protocol, t, initial, initial);
    return Sample{std::exp(-l.work / temperature), false};
  });
  return out;
}

JarzynskiResult jarzynski_estimate(const Protocol& protocol, const Distribution& initial,
                                   double temperature, std::uint64_t n, std::uint64_t seed,
                                   unsigned workers) {
  const Distribution eq = boltzmann_distribution(protocol.initial_landscape(), temperature);
  if (initial.size() != eq.size()) throw ConfigError("initial distribution dimension mismatch");
  for (std::size_t i = 0; i < eq.size(); ++i) {
    if (std::abs(initial[i] - eq[i]) > 1e-12) {
      throw ConfigError("Jarzynski estimate requires the initial Boltzmann distribution");
    }
  }
  return jarzynski_estimate(protocol, temperature, n, seed, workers);
}

SecondLawVerdict second_law_check(const EnumerationReport& report) {
  return SecondLawVerdict{report.mean_entropy_production >= -1e-10, report.mean_entropy_production};
}

MarginalAverages marginal_averages(const Protocol& protocol, const Distribution& initial) {
  if (initial.size() != protocol.state_count()) {
    throw ConfigError("initial distribution has " + std::to_string(initial.size()) +
                      " states, protocol has " + std::to_string(protocol.state_count()));
  }
  MarginalAverages out;
  Distribution p = initial;
  const EnergyLandscape* landscape = &protocol.initial_landscape();
  for (const auto& step : protocol.steps()) {
    if (const auto* drive = std::get_if<DriveStep>(&step)) {
      for (std::size_t s = 0; s < p.size(); ++s) out.mean_work += p[s] * (drive->landscape[s] - (*landscape)[s]);
      landscape = &drive->landscape;
    } else {
      const auto& kernel = std::get<BathStep>(step).kernel;
      for (std::size_t s = 0; s < p.size(); ++s) {
        for (std::size_t t = 0; t < p.size(); ++t) {
          out.mean_heat += p[s] * kernel(t, s) * ((*landscape)[t] - (*landscape)[s]);
        }
      }
      p = kernel.apply(p);
    }
  }
  return out;
}

}  // namespace qthermo
