#pragma once

// Reference computations for the classical tests: plain brute force, no library code.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "qthermo/stochastic.hpp"

namespace oracle {

using Rows = std::vector<std::vector<double>>;  // rows[target][source]

struct RawStep {
  std::vector<double> drive;  // non-empty: a drive to these energies
  Rows kernel;                // otherwise a bath step with this kernel
};

struct RawProtocol {
  std::vector<double> energies;
  std::vector<RawStep> steps;
  double temperature = 1.0;
};

inline std::vector<double> boltzmann(const std::vector<double>& e, double t) {
  double z = 0.0;
  for (double x : e) z += std::exp(-x / t);
  std::vector<double> p;
  for (double x : e) p.push_back(std::exp(-x / t) / z);
  return p;
}

inline double free_energy(const std::vector<double>& e, double t) {
  double z = 0.0;
  for (double x : e) z += std::exp(-x / t);
  return -t * std::log(z);
}

// Half the time hold; otherwise propose one of the other n-1 states uniformly and accept with
// the Metropolis ratio.
inline Rows lazy_metropolis(const std::vector<double>& e, double t) {
  const std::size_t n = e.size();
  Rows k(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double leave = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      k[i][j] = 0.5 / double(n - 1) * std::min(1.0, std::exp(-(e[i] - e[j]) / t));
      leave += k[i][j];
    }
    k[j][j] = 1.0 - leave;
  }
  return k;
}

inline qthermo::Protocol to_library(const RawProtocol& raw) {
  std::vector<qthermo::ProtocolStep> steps;
  for (const auto& s : raw.steps) {
    if (!s.drive.empty()) {
      steps.emplace_back(qthermo::DriveStep{qthermo::EnergyLandscape(s.drive)});
    } else {
      steps.emplace_back(qthermo::BathStep{qthermo::TransitionKernel(s.kernel)});
    }
  }
  return qthermo::Protocol(qthermo::EnergyLandscape(raw.energies), std::move(steps), raw.temperature);
}

struct Totals {
  std::uint64_t rows = 0;
  double mean_sigma = 0.0;  // over reversible trajectories only
  double mean_exp_minus_sigma = 0.0;
  double mean_work = 0.0;
  double mean_heat = 0.0;
  double mean_exp_minus_w = 0.0;
  double irreversible_mass = 0.0;
  double total_probability = 0.0;
};

// Enumerates every sequence of checkpoint states by counting in base n.
inline Totals brute_force(const RawProtocol& raw, const std::vector<double>& p0, bool final_equilibrium) {
  const std::size_t n = raw.energies.size();
  std::vector<const Rows*> kernels;
  for (const auto& s : raw.steps)
    if (s.drive.empty()) kernels.push_back(&s.kernel);
  const std::size_t k_count = kernels.size();

  std::vector<double> p_end = p0;
  for (const Rows* k : kernels) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[i] += (*k)[i][j] * p_end[j];
    p_end = next;
  }
  std::vector<double> final_e = raw.energies;
  for (const auto& s : raw.steps)
    if (!s.drive.empty()) final_e = s.drive;
  const std::vector<double> p1 = final_equilibrium ? boltzmann(final_e, raw.temperature) : p_end;

  Totals out;
  std::vector<std::size_t> x(k_count + 1, 0);
  std::uint64_t total = 1;
  for (std::size_t c = 0; c <= k_count; ++c) total *= n;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    for (std::size_t c = 0; c <= k_count; ++c) {
      x[c] = rest % n;
      rest /= n;
    }
    double forward = p0[x[0]];
    double backward = p1[x[k_count]];
    double work = 0.0, heat = 0.0;
    std::vector<double> e = raw.energies;
    std::size_t c = 0;
    for (const auto& s : raw.steps) {
      if (!s.drive.empty()) {
        work += s.drive[x[c]] - e[x[c]];
        e = s.drive;
      } else {
        forward *= s.kernel[x[c + 1]][x[c]];
        backward *= s.kernel[x[c]][x[c + 1]];
        heat += e[x[c + 1]] - e[x[c]];
        ++c;
      }
    }
    ++out.rows;
    if (forward == 0.0) continue;
    out.total_probability += forward;
    out.mean_work += forward * work;
    out.mean_heat += forward * heat;
    out.mean_exp_minus_w += forward * std::exp(-work / raw.temperature);
    if (backward == 0.0) {
      out.irreversible_mass += forward;
      continue;
    }
    const double sigma = std::log(forward / backward);
    out.mean_sigma += forward * sigma;
    out.mean_exp_minus_sigma += forward * std::exp(-sigma);
  }
  return out;
}

}  // namespace oracle
