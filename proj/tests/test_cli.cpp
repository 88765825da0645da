// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "geored/error.hpp"
#include "geored/scenarios.hpp"

using namespace geored;
using namespace geored::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("geored_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("scenario listing") {
  auto all = list_scenarios();
  REQUIRE(all.size() >= 10);
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].name < all[i].name);
  auto has = [&](const std::string& n) {
    return std::any_of(all.begin(), all.end(), [&](const ScenarioInfo& s) { return s.name == n; });
  };
  CHECK(has("calogero-from-matrix"));
  CHECK(has("dirac-two-particle-noncommuting-positions"));
  CHECK(has("deformed-poincare-jacobi"));
  for (const auto& s : all) {
    CHECK_FALSE(s.refs.empty());
    CHECK(s.defaults.is_object());
  }
}

TEST_CASE("run a scenario") {
  ScenarioConfig c;
  c.name = "riccati-classical";
  auto r = run(c);
  CHECK(r.status == Status::PASS);
  CHECK(r.metrics["max_dev"].get<double>() < 1e-8);
  CHECK(r.to_json()["config_echo"]["params"]["a"] == 0.5);

  c.name = "no-such-scenario";
  CHECK_THROWS_AS(run(c), UnknownScenario);

  ScenarioConfig bad;
  bad.name = "riccati-classical";
  bad.params = {{"zeta", 1.0}};
  CHECK_THROWS_WITH_AS(run(bad), doctest::Contains("params.zeta"), ConfigError);
  bad.params = {{"a", "text"}};
  CHECK_THROWS_AS(run(bad), ConfigError);
  bad.params = nlohmann::json::object();
  bad.tolerances = {{"not_a_check", 1.0}};
  CHECK_THROWS_WITH_AS(run(bad), doctest::Contains("tolerances.not_a_check"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"nam", "x"}}), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json({{"rk45_tol", -1.0}}), ConfigError);
}

TEST_CASE("tightened tolerance fails") {
  ScenarioConfig c;
  c.name = "riccati-classical";
  auto loose = run(c);
  c.tolerances = {{"max_dev", 1e-6 * 1e-6}};
  auto tight = run(c);
  CHECK(loose.status == Status::PASS);
  CHECK(tight.status == Status::FAIL);
}

TEST_CASE("reports are deterministic") {
  auto a = fresh_dir("a"), b = fresh_dir("b");
  ScenarioConfig c;
  c.name = "qriccati-n3";
  c.seed = 42;
  c.output_dir = a.string();
  auto ra = run(c);
  c.output_dir = b.string();
  auto rb = run(c);
  CHECK(ra.status == Status::PASS);
  const auto ja = slurp(a / "qriccati-n3" / "report.json");
  CHECK_FALSE(ja.empty());
  CHECK(ja == slurp(b / "qriccati-n3" / "report.json"));
  for (const auto& f : ra.artifacts) {
    CHECK(fs::exists(a / "qriccati-n3" / f));
    CHECK(slurp(a / "qriccati-n3" / f) == slurp(b / "qriccati-n3" / f));
  }
  c.seed = 43;
  c.output_dir.clear();
  auto rc = run(c);
  CHECK(rc.metrics["final_dev"] != ra.metrics["final_dev"]);
}

TEST_CASE("config json round trip") {
  ScenarioConfig c;
  c.name = "frames-checks";
  c.seed = 7;
  c.rk45_tol = 1e-9;
  c.params = {{"rapidity", 0.5}};
  auto d = ScenarioConfig::from_json(c.to_json());
  CHECK(d.name == c.name);
  CHECK(d.seed == 7);
  CHECK(d.rk45_tol == 1e-9);
  CHECK(d.params == c.params);
  CHECK(run(d).status == Status::PASS);
}

TEST_CASE("run-all with overrides") {
  auto dir = fresh_dir("configs");
  std::ofstream(dir / "riccati-classical.json") << R"({"tolerances": {"max_dev": 1e-18}})";
  std::ofstream(dir / "dirac-bracket-consistency.json") << R"({"params": {"points": 2, "jacobi_points": 1}})";
  ScenarioConfig base;
  auto empty = fresh_dir("empty");
  auto s = run_all(dir.string(), base);
  CHECK(s.reports.size() == list_scenarios().size());
  CHECK(s.pass + s.fail + s.partial == static_cast<int>(s.reports.size()));
  for (const auto& r : s.reports)
    if (r.name == "riccati-classical") CHECK(r.status == Status::FAIL);
  // an empty directory falls back to defaults
  auto s2 = run_all(empty.string(), base, default_exec());
  for (const auto& r : s2.reports)
    if (r.name == "riccati-classical") CHECK(r.status == Status::PASS);
}
