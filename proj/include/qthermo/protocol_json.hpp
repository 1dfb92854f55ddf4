#pragma once

// JSON form of a protocol:
//   {"states": n, "initial_energies": [...], "temperature": t,
//    "steps": [{"drive": [...]} | {"bath": "metropolis"} | {"bath_matrix": [[...]]}],
//    "initial": [...]}            // optional starting distribution
// "bath": "metropolis" is resolved against the landscape in force at that step.
// bath_matrix rows are indexed by target state, columns by source state.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qthermo/stochastic.hpp"

namespace qthermo {

struct ProtocolDocument {
  Protocol protocol;
  std::optional<Distribution> initial;
};

/// Appends every violation to `problems` (prefixed with `path`); returns the document only
/// when there were none.
std::optional<ProtocolDocument> parse_protocol(const nlohmann::json& doc,
                                               std::vector<std::string>& problems,
                                               const std::string& path = "");

/// Throws ConfigError carrying all violations.
ProtocolDocument protocol_from_json(const nlohmann::json& doc);
ProtocolDocument protocol_from_json_text(std::string_view text);

/// Bath steps are written as explicit bath_matrix entries.
nlohmann::json protocol_to_json(const Protocol& protocol);

}  // namespace qthermo
