#ifndef QTHERMO_QTHERMO_H
#define QTHERMO_QTHERMO_H

/* C interface to the qthermo library.
 *
 * Every function returns a qt_status. On failure, qt_last_error() describes the problem for
 * the calling thread until that thread's next call. Handles are opaque and must be released
 * with their matching *_free function. Strings returned through out-parameters are owned by
 * the library and stay valid until the owning handle is freed.
 *
 * Energies are in natural units (k_B = hbar = 1) unless an `si` flag is set. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QT_API __declspec(dllexport)
#else
#define QT_API __attribute__((visibility("default")))
#endif

typedef enum qt_status {
  QT_OK = 0,
  QT_ERR_INVALID_ARGUMENT = 1, /* null pointer, wrong length */
  QT_ERR_CONFIG = 2,           /* configuration or schema violation */
  QT_ERR_ACCEPTANCE = 3,       /* verify experiment reported a failing criterion */
  QT_ERR_CAPACITY = 4,         /* enumeration or truncation limit exceeded */
  QT_ERR_DOMAIN = 5,           /* value outside the mathematical domain */
  QT_ERR_DEGENERATE = 6,       /* quantity undefined for these inputs */
  QT_ERR_IO = 7,
  QT_ERR_INTERNAL = 8
} qt_status;

QT_API const char* qt_version(void);
QT_API const char* qt_last_error(void);
QT_API const char* qt_status_name(qt_status status);

/* ---- classical stochastic thermodynamics ---- */

typedef struct qt_protocol qt_protocol;

/* Protocol JSON: {"states", "initial_energies", "temperature", "steps", optional "initial"}. */
QT_API qt_status qt_protocol_from_json(const char* json, qt_protocol** out);
QT_API void qt_protocol_free(qt_protocol* protocol);
QT_API qt_status qt_protocol_state_count(const qt_protocol* protocol, size_t* out);
QT_API qt_status qt_protocol_temperature(const qt_protocol* protocol, double* out);

QT_API qt_status qt_boltzmann_distribution(const double* energies, size_t n, double temperature, double* out);
QT_API qt_status qt_free_energy(const double* energies, size_t n, double temperature, double* out);

typedef enum qt_boundary { QT_BOUNDARY_PUSHFORWARD = 0, QT_BOUNDARY_FINAL_EQUILIBRIUM = 1 } qt_boundary;

typedef struct qt_enumeration_summary {
  uint64_t rows;
  double mean_entropy_production;
  double mean_exp_minus_entropy_production;
  double mean_work;
  double mean_heat;
  double mean_exp_minus_work_over_t;
  double absolute_irreversibility_mass;
} qt_enumeration_summary;

/* `initial` may be NULL (Boltzmann distribution of the initial landscape). */
QT_API qt_status qt_enumerate_exact(const qt_protocol* protocol, const double* initial, qt_boundary boundary,
                                    qt_enumeration_summary* out);

typedef struct qt_estimate {
  double mean;
  double std_error;
  uint64_t n_samples;
  double absolute_irreversibility_fraction;
  double target;
} qt_estimate;

QT_API qt_status qt_ift_estimate(const qt_protocol* protocol, const double* initial, uint64_t n, uint64_t seed,
                                 unsigned workers, qt_estimate* out);
QT_API qt_status qt_jarzynski_estimate(const qt_protocol* protocol, uint64_t n, uint64_t seed, unsigned workers,
                                       qt_estimate* out);

/* ---- information thermodynamics ---- */

QT_API qt_status qt_shannon_entropy_bits(double p, double* out);
QT_API qt_status qt_landauer_cost(double p, double temperature, int si, double* out);
QT_API qt_status qt_szilard_work_bound(double temperature, int si, double* out);

typedef struct qt_demon_result {
  double delta_s_bits;
  double delta_i_bits;
  double entropy_production_nats;
  double ift_mean;
  double work_extracted;
  double landauer_cost;
  double eta;      /* valid only when has_eta != 0 */
  int has_eta;
} qt_demon_result;

/* feedback: 0 = reset, 1 = identity. */
QT_API qt_status qt_demon_run(double error_rate, double input_bias, int feedback, double temperature, int si,
                              qt_demon_result* out);

/* ---- quantum ---- */

/* <S_i> and the von Neumann entropy change for: start in basis state `start_index`, apply the
 * 2x2 unitary (row-major real and imaginary parts), measure in the basis whose first vector is
 * (b0_re[0] + i b0_im[0], b0_re[1] + i b0_im[1]) and second is its orthogonal complement. */
QT_API qt_status qt_measurement_entropy(const double u_re[4], const double u_im[4], const double b0_re[2],
                                        const double b0_im[2], int start_index, double* mean_entropy_production,
                                        double* delta_von_neumann);

typedef struct qt_engine_performance {
  double mean_work;
  double mean_quantum_heat;
  double mean_landauer;
  double eta;
  double power;
  double outcome_minus_fraction;
  double outcome_minus_std_error;
  uint64_t n_cycles;
} qt_engine_performance;

QT_API qt_status qt_engine_exact(double omega0, double omega_rabi, double tau, double temperature,
                                 qt_engine_performance* out);
QT_API qt_status qt_engine_run(double omega0, double omega_rabi, double tau, double temperature, uint64_t cycles,
                               uint64_t seed, unsigned workers, qt_engine_performance* out);

typedef struct qt_gate_result {
  double fidelity;
  double energy_joules;
  double pulse_time;
  uint64_t n_max;
} qt_gate_result;

/* calibration: 0 = semiclassical pulse time, 1 = optimized. */
QT_API qt_status qt_gate_fidelity(double theta, double n_bar, double g, double frequency_hz, int calibration,
                                  unsigned workers, qt_gate_result* out);
QT_API qt_status qt_min_photons_for_fidelity(double threshold, double g, double theta, unsigned workers,
                                             uint64_t* out);
QT_API qt_status qt_gate_energy_cost(double n_bar, double frequency_hz, double* out);

/* ---- experiments ---- */

typedef struct qt_experiment qt_experiment;
typedef struct qt_run qt_run;

/* On QT_ERR_CONFIG, qt_last_error() lists every violation, one per line. */
QT_API qt_status qt_experiment_parse(const char* json, qt_experiment** out);
QT_API void qt_experiment_free(qt_experiment* experiment);
QT_API const char* qt_experiment_kind(const qt_experiment* experiment);

/* Runs the experiment, writing the result file and its manifest when the config names an output
 * path. `out` is set even when the status is not QT_OK, so the rendered table and message stay
 * available. The status maps onto the CLI exit codes (0, 2, 3, 4). */
QT_API qt_status qt_experiment_run(const qt_experiment* experiment, unsigned workers, qt_run** out);
QT_API void qt_run_free(qt_run* run);
QT_API int qt_run_exit_code(const qt_run* run);
QT_API const char* qt_run_output(const qt_run* run);
QT_API const char* qt_run_message(const qt_run* run);
QT_API const char* qt_run_result_path(const qt_run* run);   /* NULL when nothing was written */
QT_API const char* qt_run_manifest_path(const qt_run* run); /* NULL when nothing was written */

#ifdef __cplusplus
}
#endif

#endif
