#ifndef CORRFIX_RUN_HPP
#define CORRFIX_RUN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrfix/scenario.hpp"

namespace corrfix {

struct Overrides {
  std::optional<int> mesh;
  std::optional<double> tol;
  std::optional<double> eps;
  std::optional<double> eta;
  std::optional<std::uint64_t> seed;
};

struct OpRecord {
  std::string name;
  std::string verdict; // PASS FAIL FAULT INCONCLUSIVE FOUND NONE CERTIFICATE
  std::vector<std::pair<std::string, std::string>> fields; // fixed order
  std::vector<std::string> violations;                     // pre-sorted
  std::vector<std::string> notes;
};

/// One command execution over one scenario. The structured serialization of
/// a RunReport is byte-identical across runs with the same inputs; wall
/// clock appears in the human rendering only.
struct RunReport {
  std::string command;
  std::string scenario_path;
  std::uint64_t digest = 0;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<OpRecord> ops;
  int exit_code = 0; // 0 pass, 1 violation/fault, 3 inconclusive
  double wall_seconds = 0.0;
};

/// Dispatches `command` (check | select | fixpoint | hull | equilibrium)
/// over the scenario's matching block. Invalid inputs throw (CLI exit 2).
RunReport run_scenario(const std::string& path, const std::string& command,
                       const Overrides& ov);

std::string emit_structured(const RunReport& r);
std::string emit_human(const RunReport& r);

} // namespace corrfix

#endif
