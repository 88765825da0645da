// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "geored/error.hpp"
#include "geored/scenarios.hpp"

using geored::cli::ScenarioConfig;

namespace {

struct Flags {
  std::string config_file;
  std::string scenario;
  std::uint64_t seed = 0;
  std::string out_dir;
  double rk45_tol = 0.0;
  bool parallel = false;
};

bool given(CLI::App& app, const std::string& name) {
  const auto* o = app.get_option_no_throw(name);
  return o != nullptr && o->count() > 0;
}

ScenarioConfig load(const Flags& f, CLI::App& app) {
  ScenarioConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw geored::ConfigError("cannot open config file " + f.config_file);
    try {
      c = ScenarioConfig::from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw geored::ConfigError(f.config_file + ": " + e.what());
    }
  }
  if (given(app, "--scenario")) c.name = f.scenario;
  if (given(app, "--seed")) c.seed = f.seed;
  if (given(app, "--out-dir")) c.output_dir = f.out_dir;
  if (given(app, "--rk45-tol")) {
    if (!(f.rk45_tol > 0.0)) throw geored::ConfigError("--rk45-tol must be positive");
    c.rk45_tol = f.rk45_tol;
  }
  return c;
}

void print(const geored::cli::RunReport& r) {
  std::cout << geored::cli::to_string(r.status) << "  " << r.name << "  (" << r.wall_time << " s)\n";
  for (const auto& c : r.checks)
    std::cout << "    " << (c.ok ? "ok  " : "FAIL") << " " << c.metric << " = " << c.value
              << (c.kind == geored::cli::Bound::BELOW ? " < " : " > ") << c.bound << "\n";
  if (!r.error.empty()) std::cout << "    error: " << r.error << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geored scenario runner"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List registered scenarios");

  Flags rf;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--scenario", rf.scenario, "Scenario name");
  run->add_option("--config", rf.config_file, "JSON config file");
  run->add_option("--seed", rf.seed, "Global seed");
  run->add_option("--out-dir", rf.out_dir, "Directory for reports and data");
  run->add_option("--rk45-tol", rf.rk45_tol, "RK45 absolute and relative tolerance");

  Flags af;
  std::string config_dir;
  auto* all = app.add_subcommand("run-all", "Run every scenario");
  all->add_option("--config-dir", config_dir, "Directory of NAME.json overrides");
  all->add_option("--seed", af.seed, "Global seed");
  all->add_option("--out-dir", af.out_dir, "Directory for reports and data");
  all->add_option("--rk45-tol", af.rk45_tol, "RK45 absolute and relative tolerance");
  all->add_flag("--parallel", af.parallel, "Run scenarios concurrently");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& s : geored::cli::list_scenarios()) {
        std::cout << s.name << "\t" << s.description << "\t";
        for (std::size_t i = 0; i < s.refs.size(); ++i) std::cout << (i ? "," : "") << s.refs[i];
        std::cout << "\n";
      }
      return 0;
    }
    if (*run) {
      auto cfg = load(rf, *run);
      if (cfg.name.empty()) throw geored::ConfigError("missing field 'name' (use --scenario)");
      auto rep = geored::cli::run(cfg);
      print(rep);
      return rep.status == geored::cli::Status::FAIL ? 1 : 0;
    }
    if (*all) {
      auto base = load(af, *all);
      auto sum = geored::cli::run_all(config_dir, base, af.parallel ? geored::default_exec() : geored::Exec::Serial);
      for (const auto& r : sum.reports) print(r);
      std::cout << "pass " << sum.pass << "  fail " << sum.fail << "  partial " << sum.partial << "\n";
      return sum.fail == 0 && sum.partial == 0 ? 0 : 1;
    }
  } catch (const geored::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
