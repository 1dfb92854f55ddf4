#include "qthermo/qthermo.h"

#include <cstring>
#include <optional>
#include <string>

#include "qthermo/demon.hpp"
#include "qthermo/engine.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/estimators.hpp"
#include "qthermo/gate.hpp"
#include "qthermo/protocol_json.hpp"
#include "qthermo/quantum.hpp"
#include "qthermo/runner.hpp"

struct qt_protocol {
  qthermo::ProtocolDocument document;
};

struct qt_experiment {
  qthermo::ExperimentConfig config;
  std::string kind;
};

struct qt_run {
  qthermo::RunReport report;
};

namespace {

thread_local std::string last_error;

qt_status fail(qt_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating library exceptions into status codes.
template <class Body>
qt_status guard(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const qthermo::ConfigError& e) {
    std::string joined;
    for (const auto& v : e.violations()) joined += (joined.empty() ? "" : "\n") + v;
    return fail(QT_ERR_CONFIG, joined);
  } catch (const qthermo::CapacityError& e) {
    return fail(QT_ERR_CAPACITY, e.what());
  } catch (const qthermo::DegenerateInputError& e) {
    return fail(QT_ERR_DEGENERATE, e.what());
  } catch (const qthermo::DomainError& e) {
    return fail(QT_ERR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QT_ERR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return fail(QT_ERR_INTERNAL, e.what());
  }
}

#define QT_REQUIRE(pointer)                                                           \
  do {                                                                                \
    if ((pointer) == nullptr) return fail(QT_ERR_INVALID_ARGUMENT, #pointer " is null"); \
  } while (0)

qthermo::units::UnitSystem unit_system(int si) {
  return si ? qthermo::units::UnitSystem::si : qthermo::units::UnitSystem::natural;
}

qthermo::Distribution initial_or_default(const qt_protocol* p, const double* initial) {
  const auto& protocol = p->document.protocol;
  if (initial != nullptr) {
    return qthermo::Distribution(std::vector<double>(initial, initial + protocol.state_count()));
  }
  return p->document.initial.value_or(
      qthermo::boltzmann_distribution(protocol.initial_landscape(), protocol.temperature()));
}

void copy_performance(const qthermo::EnginePerformance& perf, qt_engine_performance* out) {
  out->mean_work = perf.mean_work;
  out->mean_quantum_heat = perf.mean_quantum_heat;
  out->mean_landauer = perf.mean_landauer;
  out->eta = perf.eta;
  out->power = perf.power;
  out->outcome_minus_fraction = perf.outcome_minus_fraction;
  out->outcome_minus_std_error = perf.outcome_minus_std_error;
  out->n_cycles = perf.n_cycles;
}

qthermo::EngineConfig engine_config(double omega0, double omega_rabi, double tau, double temperature) {
  qthermo::EngineConfig c;
  c.omega0 = omega0;
  c.omega_rabi = omega_rabi;
  c.tau = tau;
  c.memory_temperature = temperature;
  return c;
}

}  // namespace

extern "C" {

const char* qt_version(void) {
  static const std::string version(qthermo::kToolVersion);
  return version.c_str();
}

const char* qt_last_error(void) { return last_error.c_str(); }

const char* qt_status_name(qt_status status) {
  switch (status) {
    case QT_OK: return "ok";
    case QT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QT_ERR_CONFIG: return "configuration error";
    case QT_ERR_ACCEPTANCE: return "acceptance failure";
    case QT_ERR_CAPACITY: return "capacity exceeded";
    case QT_ERR_DOMAIN: return "domain error";
    case QT_ERR_DEGENERATE: return "degenerate input";
    case QT_ERR_IO: return "i/o error";
    case QT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

qt_status qt_protocol_from_json(const char* json, qt_protocol** out) {
  QT_REQUIRE(json);
  QT_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    *out = new qt_protocol{qthermo::protocol_from_json_text(json)};
    return QT_OK;
  });
}

void qt_protocol_free(qt_protocol* protocol) { delete protocol; }

qt_status qt_protocol_state_count(const qt_protocol* protocol, size_t* out) {
  QT_REQUIRE(protocol);
  QT_REQUIRE(out);
  *out = protocol->document.protocol.state_count();
  return QT_OK;
}

qt_status qt_protocol_temperature(const qt_protocol* protocol, double* out) {
  QT_REQUIRE(protocol);
  QT_REQUIRE(out);
  *out = protocol->document.protocol.temperature();
  return QT_OK;
}

qt_status qt_boltzmann_distribution(const double* energies, size_t n, double temperature, double* out) {
  QT_REQUIRE(energies);
  QT_REQUIRE(out);
  return guard([&] {
    const auto p = qthermo::boltzmann_distribution(
        qthermo::EnergyLandscape(std::vector<double>(energies, energies + n)), temperature);
    std::memcpy(out, p.probabilities().data(), n * sizeof(double));
    return QT_OK;
  });
}

qt_status qt_free_energy(const double* energies, size_t n, double temperature, double* out) {
  QT_REQUIRE(energies);
  QT_REQUIRE(out);
  return guard([&] {
    *out = qthermo::free_energy(qthermo::EnergyLandscape(std::vector<double>(energies, energies + n)), temperature);
    return QT_OK;
  });
}

qt_status qt_enumerate_exact(const qt_protocol* protocol, const double* initial, qt_boundary boundary,
                             qt_enumeration_summary* out) {
  QT_REQUIRE(protocol);
  QT_REQUIRE(out);
  return guard([&] {
    const auto report = qthermo::enumerate_exact(protocol->document.protocol, initial_or_default(protocol, initial),
                                                 boundary == QT_BOUNDARY_FINAL_EQUILIBRIUM
                                                     ? qthermo::BackwardBoundary::final_equilibrium
                                                     : qthermo::BackwardBoundary::pushforward);
    out->rows = report.rows.size();
    out->mean_entropy_production = report.mean_entropy_production;
    out->mean_exp_minus_entropy_production = report.mean_exp_minus_entropy_production;
    out->mean_work = report.mean_work;
    out->mean_heat = report.mean_heat;
    out->mean_exp_minus_work_over_t = report.mean_exp_minus_work_over_t;
    out->absolute_irreversibility_mass = report.absolute_irreversibility_mass;
    return QT_OK;
  });
}

qt_status qt_ift_estimate(const qt_protocol* protocol, const double* initial, uint64_t n, uint64_t seed,
                          unsigned workers, qt_estimate* out) {
  QT_REQUIRE(protocol);
  QT_REQUIRE(out);
  return guard([&] {
    const auto r = qthermo::ift_estimate(protocol->document.protocol, initial_or_default(protocol, initial), n, seed,
                                         workers);
    *out = {r.mean, r.std_error, r.n_samples, r.absolute_irreversibility_fraction, 1.0};
    return QT_OK;
  });
}

qt_status qt_jarzynski_estimate(const qt_protocol* protocol, uint64_t n, uint64_t seed, unsigned workers,
                                qt_estimate* out) {
  QT_REQUIRE(protocol);
  QT_REQUIRE(out);
  return guard([&] {
    const auto& p = protocol->document.protocol;
    const auto r = qthermo::jarzynski_estimate(p, p.temperature(), n, seed, workers);
    *out = {r.estimate.mean, r.estimate.std_error, r.estimate.n_samples,
            r.estimate.absolute_irreversibility_fraction, r.target};
    return QT_OK;
  });
}

qt_status qt_shannon_entropy_bits(double p, double* out) {
  QT_REQUIRE(out);
  return guard([&] {
    *out = qthermo::shannon_entropy_bits(p);
    return QT_OK;
  });
}

qt_status qt_landauer_cost(double p, double temperature, int si, double* out) {
  QT_REQUIRE(out);
  return guard([&] {
    *out = qthermo::landauer_cost(p, temperature, unit_system(si));
    return QT_OK;
  });
}

qt_status qt_szilard_work_bound(double temperature, int si, double* out) {
  QT_REQUIRE(out);
  return guard([&] {
    *out = qthermo::szilard_work_bound(temperature, unit_system(si));
    return QT_OK;
  });
}

qt_status qt_demon_run(double error_rate, double input_bias, int feedback, double temperature, int si,
                       qt_demon_result* out) {
  QT_REQUIRE(out);
  if (feedback != 0 && feedback != 1) return fail(QT_ERR_INVALID_ARGUMENT, "feedback must be 0 (reset) or 1 (identity)");
  return guard([&] {
    qthermo::DemonConfig c;
    c.error_rate = error_rate;
    c.input_bias = input_bias;
    c.feedback = feedback == 0 ? qthermo::FeedbackKind::reset : qthermo::FeedbackKind::identity;
    c.temperature = temperature;
    c.units = unit_system(si);
    const auto r = qthermo::run_demon(c);
    out->delta_s_bits = r.ledger.delta_s_bits;
    out->delta_i_bits = r.ledger.delta_i_bits;
    out->entropy_production_nats = r.ledger.entropy_production_nats;
    out->ift_mean = r.ift_mean;
    out->work_extracted = r.ledger.work_extracted;
    out->landauer_cost = r.ledger.landauer_cost;
    out->has_eta = r.efficiency ? 1 : 0;
    out->eta = r.efficiency ? r.efficiency->eta : 0.0;
    return QT_OK;
  });
}

qt_status qt_measurement_entropy(const double u_re[4], const double u_im[4], const double b0_re[2],
                                 const double b0_im[2], int start_index, double* mean_entropy_production,
                                 double* delta_von_neumann) {
  QT_REQUIRE(u_re);
  QT_REQUIRE(u_im);
  QT_REQUIRE(b0_re);
  QT_REQUIRE(b0_im);
  QT_REQUIRE(mean_entropy_production);
  QT_REQUIRE(delta_von_neumann);
  if (start_index != 0 && start_index != 1) return fail(QT_ERR_INVALID_ARGUMENT, "start_index must be 0 or 1");
  return guard([&] {
    using qthermo::Complex;
    const qthermo::Unitary2 u(qthermo::Unitary2::Matrix{{{Complex(u_re[0], u_im[0]), Complex(u_re[1], u_im[1])},
                                                         {Complex(u_re[2], u_im[2]), Complex(u_re[3], u_im[3])}}});
    const Complex a(b0_re[0], b0_im[0]);
    const Complex b(b0_re[1], b0_im[1]);
    const qthermo::PureState first(a, b);
    const qthermo::PureState second(-std::conj(first[1]), std::conj(first[0]));
    const qthermo::MeasurementBasis basis(first, second);
    const auto report = qthermo::entropy_production_protocol(basis[static_cast<std::size_t>(start_index)], u, basis);
    *mean_entropy_production = report.mean_entropy_production;
    *delta_von_neumann = report.delta_von_neumann;
    return QT_OK;
  });
}

qt_status qt_engine_exact(double omega0, double omega_rabi, double tau, double temperature,
                          qt_engine_performance* out) {
  QT_REQUIRE(out);
  return guard([&] {
    copy_performance(qthermo::exact_engine_performance(engine_config(omega0, omega_rabi, tau, temperature)), out);
    return QT_OK;
  });
}

qt_status qt_engine_run(double omega0, double omega_rabi, double tau, double temperature, uint64_t cycles,
                        uint64_t seed, unsigned workers, qt_engine_performance* out) {
  QT_REQUIRE(out);
  return guard([&] {
    auto c = engine_config(omega0, omega_rabi, tau, temperature);
    c.n_cycles = cycles;
    c.seed = seed;
    copy_performance(qthermo::run_engine(c, workers), out);
    return QT_OK;
  });
}

qt_status qt_gate_fidelity(double theta, double n_bar, double g, double frequency_hz, int calibration,
                           unsigned workers, qt_gate_result* out) {
  QT_REQUIRE(out);
  return guard([&] {
    qthermo::GateOptions options;
    options.field_frequency_hz = frequency_hz;
    options.calibration =
        calibration ? qthermo::PulseCalibration::optimized : qthermo::PulseCalibration::semiclassical;
    options.workers = workers;
    const auto r = qthermo::gate_fidelity(theta, n_bar, g, options);
    *out = {r.fidelity, r.energy_joules, r.pulse_time, r.n_max};
    return QT_OK;
  });
}

qt_status qt_min_photons_for_fidelity(double threshold, double g, double theta, unsigned workers, uint64_t* out) {
  QT_REQUIRE(out);
  return guard([&] {
    *out = qthermo::min_photons_for_fidelity(threshold, g, theta, workers);
    return QT_OK;
  });
}

qt_status qt_gate_energy_cost(double n_bar, double frequency_hz, double* out) {
  QT_REQUIRE(out);
  return guard([&] {
    *out = qthermo::gate_energy_cost(n_bar, frequency_hz);
    return QT_OK;
  });
}

qt_status qt_experiment_parse(const char* json, qt_experiment** out) {
  QT_REQUIRE(json);
  QT_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto config = qthermo::parse_config_text(json);
    std::string kind(qthermo::kind_name(config.kind));
    *out = new qt_experiment{std::move(config), std::move(kind)};
    return QT_OK;
  });
}

void qt_experiment_free(qt_experiment* experiment) { delete experiment; }

const char* qt_experiment_kind(const qt_experiment* experiment) {
  return experiment ? experiment->kind.c_str() : nullptr;
}

qt_status qt_experiment_run(const qt_experiment* experiment, unsigned workers, qt_run** out) {
  QT_REQUIRE(experiment);
  QT_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    *out = new qt_run{qthermo::run(experiment->config, workers)};
    switch ((*out)->report.exit_code) {
      case qthermo::exit_code::success: return QT_OK;
      case qthermo::exit_code::validation: return fail(QT_ERR_CONFIG, (*out)->report.message);
      case qthermo::exit_code::acceptance: return fail(QT_ERR_ACCEPTANCE, (*out)->report.message);
      case qthermo::exit_code::capacity: return fail(QT_ERR_CAPACITY, (*out)->report.message);
      default: return fail(QT_ERR_INTERNAL, (*out)->report.message);
    }
  });
}

void qt_run_free(qt_run* run) { delete run; }

int qt_run_exit_code(const qt_run* run) { return run ? run->report.exit_code : qthermo::exit_code::failure; }

const char* qt_run_output(const qt_run* run) { return run ? run->report.rendered.c_str() : nullptr; }

const char* qt_run_message(const qt_run* run) { return run ? run->report.message.c_str() : nullptr; }

const char* qt_run_result_path(const qt_run* run) {
  return run && run->report.result_path ? run->report.result_path->c_str() : nullptr;
}

const char* qt_run_manifest_path(const qt_run* run) {
  return run && run->report.manifest_path ? run->report.manifest_path->c_str() : nullptr;
}

}  // extern "C"
