// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

// Usage: acceptance [N ...]   runs the listed criteria (all by default).

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geored/scenarios.hpp"

using namespace geored::cli;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
};

void absorb(Outcome& o, const RunReport& r) {
  if (r.status != Status::PASS) o.ok = false;
  o.detail << " [" << r.name;
  for (const auto& c : r.checks)
    o.detail << " " << c.metric << "=" << c.value << (c.kind == Bound::BELOW ? "<" : ">") << c.bound
             << (c.ok ? "" : "!");
  if (!r.error.empty()) o.detail << " error=" << r.error;
  o.detail << "]";
}

RunReport scenario(const std::string& name, nlohmann::json params = nlohmann::json::object()) {
  ScenarioConfig c;
  c.name = name;
  c.params = std::move(params);
  c.rk45_tol = 1e-10;
  c.seed = 42;
  return run(c);
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> list = {
      {"reduction diagrams commute (max_dev < 1e-6)",
       [](Outcome& o) {
         for (const char* n : {"radial-l", "radial-E", "calogero-from-matrix", "so3-quotient", "riccati-classical"})
           absorb(o, scenario(n));
       }},
      {"eigenvalues of free matrix motion follow the two-body flow (< 1e-6 until gap < 0.05)",
       [](Outcome& o) { absorb(o, scenario("calogero-from-matrix")); }},
      {"quantum coset reduction, N = 3 (error < 1e-6 at t = 1, unitarity drift < 1e-9)",
       [](Outcome& o) { absorb(o, scenario("qriccati-n3", {{"n1", 1}, {"n2", 2}, {"bound", 2.0}, {"t1", 1.0}})); }},
      {"relativistic free particle: energy, kernel, Darboux, Jacobi, Casimir",
       [](Outcome& o) { absorb(o, scenario("relativistic-free-particle", {{"energy_points", 100}, {"points", 20}})); }},
      {"Dirac bracket consistency at 20 on-shell points",
       [](Outcome& o) {
         absorb(o, scenario("dirac-bracket-consistency",
                            {{"points", 20}, {"jacobi_points", 20}, {"m1", 1.0}, {"m2", 2.0}, {"lambda", 0.1}}));
       }},
      {"positions do not commute on shell and commute without constraints",
       [](Outcome& o) { absorb(o, scenario("dirac-two-particle-noncommuting-positions")); }},
      {"world line condition, dynamical gauge (< 1e-6 |omega|, 10 boosts)",
       [](Outcome& o) { absorb(o, scenario("world-line-condition", {{"boosts", 10}, {"omega_norm", 1e-4}})); }},
      {"deformed Poincare algebra (Jacobi < 1e-12, exact 1/K scaling)",
       [](Outcome& o) { absorb(o, scenario("deformed-poincare-jacobi", {{"K", {0.1, 1.0, 100.0}}})); }},
      {"dual vs central differences (< 1e-5 relative), RK4 order four",
       [](Outcome& o) { absorb(o, scenario("kernel-cross-check")); }},
      {"frames: projector, compatibility, Frobenius, metric family",
       [](Outcome& o) { absorb(o, scenario("frames-checks")); }},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool all_ok = true;
  const auto& list = criteria();
  for (std::size_t k = 0; k < list.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!wanted.empty() && !wanted.count(id)) continue;
    Outcome o;
    try {
      list[k].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    all_ok = all_ok && o.ok;
    std::printf("CRITERION %d %s: %s%s\n", id, o.ok ? "PASS" : "FAIL", list[k].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
