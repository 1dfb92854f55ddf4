#include <cmath>
#include <cstring>
#include <string>

#include <gtest/gtest.h>

#include "qthermo/qthermo.h"

namespace {

const char* kQuench = R"({"states": 2, "initial_energies": [0, 0], "temperature": 1,
                          "steps": [{"drive": [0, 1]}]})";

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(qt_version(), "1.0.0");
  EXPECT_STREQ(qt_status_name(QT_ERR_CAPACITY), "capacity exceeded");
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(qt_protocol_from_json(nullptr, nullptr), QT_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::strlen(qt_last_error()), 0u);
  double out = 0;
  EXPECT_EQ(qt_free_energy(nullptr, 2, 1.0, &out), QT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ProtocolLifecycle) {
  qt_protocol* p = nullptr;
  ASSERT_EQ(qt_protocol_from_json(kQuench, &p), QT_OK);
  size_t n = 0;
  double t = 0;
  EXPECT_EQ(qt_protocol_state_count(p, &n), QT_OK);
  EXPECT_EQ(qt_protocol_temperature(p, &t), QT_OK);
  EXPECT_EQ(n, 2u);
  EXPECT_EQ(t, 1.0);

  qt_enumeration_summary s{};
  ASSERT_EQ(qt_enumerate_exact(p, nullptr, QT_BOUNDARY_FINAL_EQUILIBRIUM, &s), QT_OK);
  EXPECT_EQ(s.rows, 2u);
  EXPECT_NEAR(s.mean_exp_minus_work_over_t, 0.5 + 0.5 * std::exp(-1.0), 1e-12);

  qt_estimate e{};
  ASSERT_EQ(qt_jarzynski_estimate(p, 50000, 1, 2, &e), QT_OK);
  EXPECT_LE(std::abs(e.mean - e.target), 4 * e.std_error);
  qt_protocol_free(p);
}

TEST(CApi, ConfigErrorsListEveryViolation) {
  qt_protocol* p = nullptr;
  EXPECT_EQ(qt_protocol_from_json(R"({"states": 2, "temperature": -1, "steps": [], "x": 1})", &p), QT_ERR_CONFIG);
  EXPECT_EQ(p, nullptr);
  const std::string err = qt_last_error();
  EXPECT_NE(err.find("temperature"), std::string::npos);
  EXPECT_NE(err.find("x"), std::string::npos);
}

TEST(CApi, ScalarHelpers) {
  const double e[2] = {0.0, 1.0};
  double p[2];
  ASSERT_EQ(qt_boltzmann_distribution(e, 2, 1.0, p), QT_OK);
  EXPECT_NEAR(p[0], 0.7311, 1e-4);
  double v = 0;
  EXPECT_EQ(qt_boltzmann_distribution(e, 2, 0.0, p), QT_ERR_DOMAIN);
  ASSERT_EQ(qt_landauer_cost(0.25, 1.0, 0, &v), QT_OK);
  EXPECT_NEAR(v, 0.5623, 1e-4);
  ASSERT_EQ(qt_szilard_work_bound(300.0, 1, &v), QT_OK);
  EXPECT_NEAR(v, 2.871e-21, 1e-24);
  ASSERT_EQ(qt_gate_energy_cost(1000.0, 6e9, &v), QT_OK);
  EXPECT_NEAR(v, 3.97e-21, 1e-23);
}

TEST(CApi, QuantumAndEngine) {
  const double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
  const double u_re[4] = {c, -s, s, c}, u_im[4] = {0, 0, 0, 0};
  const double b_re[2] = {1, 0}, b_im[2] = {0, 0};
  double sigma = 0, dvn = 0;
  ASSERT_EQ(qt_measurement_entropy(u_re, u_im, b_re, b_im, 0, &sigma, &dvn), QT_OK);
  EXPECT_NEAR(sigma, 0.5623, 1e-4);
  EXPECT_NEAR(sigma, dvn, 1e-12);

  qt_engine_performance perf{};
  ASSERT_EQ(qt_engine_exact(1.0, 1.0, M_PI / 2, 0.1, &perf), QT_OK);
  EXPECT_NEAR(perf.eta, 1 - 0.1 * std::log(2.0) / 0.5, 1e-12);
  EXPECT_EQ(qt_engine_exact(1.0, 1.0, 0.0, 0.1, &perf), QT_ERR_CONFIG);
}

TEST(CApi, Demon) {
  qt_demon_result r{};
  ASSERT_EQ(qt_demon_run(0.0, 0.5, 0, 1.0, 0, &r), QT_OK);
  EXPECT_NEAR(r.entropy_production_nats, 0.0, 1e-14);
  EXPECT_NEAR(r.ift_mean, 1.0, 1e-12);
  EXPECT_EQ(qt_demon_run(0.1, 0.5, 7, 1.0, 0, &r), QT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ExperimentRun) {
  qt_experiment* x = nullptr;
  ASSERT_EQ(qt_experiment_parse(R"({"kind": "zeno-sweep", "params": {"points": 3}})", &x), QT_OK);
  EXPECT_STREQ(qt_experiment_kind(x), "zeno-sweep");
  qt_run* run = nullptr;
  ASSERT_EQ(qt_experiment_run(x, 2, &run), QT_OK);
  EXPECT_EQ(qt_run_exit_code(run), 0);
  EXPECT_EQ(qt_run_result_path(run), nullptr);
  const std::string out = qt_run_output(run);
  EXPECT_EQ(out.rfind("omega_tau,", 0), 0u);
  qt_run_free(run);
  qt_experiment_free(x);

  EXPECT_EQ(qt_experiment_parse(R"({"kind": "engine", "params": {"tau": -1, "bogus": 0}})", &x), QT_ERR_CONFIG);
  const std::string err = qt_last_error();
  EXPECT_NE(err.find('\n'), std::string::npos);
}

TEST(CApi, CapacityStatus) {
  qt_experiment* x = nullptr;
  ASSERT_EQ(qt_experiment_parse(R"({"kind": "gate-cost", "params": {"nbar": 1e9}})", &x), QT_OK);
  qt_run* run = nullptr;
  const qt_status status = qt_experiment_run(x, 1, &run);
  ASSERT_NE(run, nullptr);
  EXPECT_EQ(status, QT_ERR_CAPACITY);
  EXPECT_EQ(qt_run_exit_code(run), 4);
  qt_run_free(run);
  qt_experiment_free(x);
}

}  // namespace
