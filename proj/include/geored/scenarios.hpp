// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "geored/flow.hpp"
#include "geored/parallel.hpp"

namespace geored::cli {

struct ScenarioConfig {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  double rk45_tol = 1e-10;
  // check name -> bound, replacing the scenario default
  nlohmann::json tolerances = nlohmann::json::object();
  std::string output_dir;  // empty: no files written
  std::uint64_t seed = 42;

  flow::IntegratorConfig integrator() const { return flow::IntegratorConfig::rk45(rk45_tol); }
  // Throws ConfigError naming the offending field.
  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class Status { PASS, FAIL, PARTIAL };
std::string to_string(Status s);

enum class Bound { BELOW, ABOVE };

struct Check {
  std::string metric;
  double value = 0.0;
  double bound = 0.0;
  Bound kind = Bound::BELOW;  // BELOW: value < bound
  bool ok = false;
};

struct RunReport {
  std::string name;
  Status status = Status::PASS;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<std::string> artifacts;  // relative to output_dir/name
  nlohmann::json config_echo;
  std::string error;
  double wall_time = 0.0;  // not part of to_json

  nlohmann::json to_json() const;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::vector<std::string> refs;
  nlohmann::json defaults;
};

// Sorted by name.
std::vector<ScenarioInfo> list_scenarios();

// Throws UnknownScenario and ConfigError; scenario-internal errors give a FAIL report.
RunReport run(const ScenarioConfig& config);

struct RunSummary {
  int pass = 0;
  int fail = 0;
  int partial = 0;
  std::vector<RunReport> reports;
};
// NAME.json in config_dir overrides the defaults for that scenario; base supplies
// seed, output_dir and rk45_tol.
RunSummary run_all(const std::string& config_dir, const ScenarioConfig& base, Exec ex = Exec::Serial);

}  // namespace geored::cli
