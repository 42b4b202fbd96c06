#pragma once

// Command-line front end. Kept as a library so tests can drive it in-process.

#include "qstego/key_budget.hpp"
#include "qstego/protocol_sim.hpp"
#include "qstego/qecc_demo.hpp"
#include "qstego/secrecy_analysis.hpp"
#include "qstego/stego_codec.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace qstego::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kDomain = 3, kIntegrity = 4 };

nlohmann::json to_json(const RateReport& r);
nlohmann::json to_json(const KeyBudgetReport& r);
nlohmann::json to_json(const SecrecyReport& r);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const SimResult& r);
nlohmann::json to_json(const QeccDemoRecord& r);

/// Flattens an array of flat JSON objects into CSV (header from the first row).
std::string to_csv(const nlohmann::json& rows);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

/// Runs one invocation. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qstego::cli
