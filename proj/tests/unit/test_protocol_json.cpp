#include <gtest/gtest.h>

#include "qthermo/errors.hpp"
#include "qthermo/protocol_json.hpp"

namespace {

using namespace qthermo;
using nlohmann::json;

json valid() {
  return json::parse(R"({"states": 2, "initial_energies": [0, 0], "temperature": 1.0,
                         "steps": [{"drive": [0, 1]}, {"bath": "metropolis"},
                                   {"bath_matrix": [[0.9, 0.2], [0.1, 0.8]]}]})");
}

std::vector<std::string> violations_of(const json& doc) {
  try {
    protocol_from_json(doc);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

TEST(ProtocolJson, ParsesValidDocument) {
  const auto doc = protocol_from_json(valid());
  EXPECT_EQ(doc.protocol.state_count(), 2u);
  EXPECT_EQ(doc.protocol.bath_step_count(), 2u);
  EXPECT_FALSE(doc.initial.has_value());
  // Metropolis resolves against the landscape in force: (0, 1) after the drive.
  const auto& k = std::get<BathStep>(doc.protocol.steps()[1]).kernel;
  EXPECT_NEAR(k(1, 0), 0.5 * std::exp(-1.0), 1e-15);
  const auto& m = std::get<BathStep>(doc.protocol.steps()[2]).kernel;
  EXPECT_DOUBLE_EQ(m(1, 0), 0.1);
}

TEST(ProtocolJson, RoundTrip) {
  const auto doc = protocol_from_json(valid());
  const auto again = protocol_from_json(protocol_to_json(doc.protocol));
  EXPECT_EQ(again.protocol.steps().size(), doc.protocol.steps().size());
  const auto& a = std::get<BathStep>(doc.protocol.steps()[1]).kernel;
  const auto& b = std::get<BathStep>(again.protocol.steps()[1]).kernel;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a(i, j), b(i, j));
}

TEST(ProtocolJson, ColumnSumViolation) {
  auto doc = valid();
  doc["steps"][2]["bath_matrix"] = json::parse("[[0.8, 0.2], [0.1, 0.8]]");
  const auto v = violations_of(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(mentions(v, "steps[2].bath_matrix"));
  EXPECT_TRUE(mentions(v, "0.9"));
}

TEST(ProtocolJson, NegativeTemperatureNamesField) {
  auto doc = valid();
  doc["temperature"] = -1.0;
  EXPECT_TRUE(mentions(violations_of(doc), "temperature"));
}

TEST(ProtocolJson, ReportsEveryViolation) {
  auto doc = valid();
  doc["temperature"] = 0;
  doc["initial_energies"] = json::array({0, 1, 2});
  doc["bogus"] = true;
  doc["steps"][0]["drive"] = json::array({1});
  const auto v = violations_of(doc);
  EXPECT_GE(v.size(), 4u);
  EXPECT_TRUE(mentions(v, "bogus"));
  EXPECT_TRUE(mentions(v, "temperature"));
  EXPECT_TRUE(mentions(v, "initial_energies"));
  EXPECT_TRUE(mentions(v, "steps[0]"));
}

TEST(ProtocolJson, InitialDistribution) {
  auto doc = valid();
  doc["initial"] = json::array({0.25, 0.75});
  EXPECT_DOUBLE_EQ((*protocol_from_json(doc).initial)[1], 0.75);
  doc["initial"] = json::array({0.5, 0.6});
  EXPECT_TRUE(mentions(violations_of(doc), "initial"));
}

TEST(ProtocolJson, MalformedText) {
  EXPECT_THROW(protocol_from_json_text("{\"states\": 2,"), ConfigError);
  EXPECT_THROW(protocol_from_json_text("[]"), ConfigError);
}

}  // namespace
