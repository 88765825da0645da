// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geored/dirac.hpp"
#include "geored/parallel.hpp"
#include "geored/scenarios.hpp"

using namespace geored;

namespace {

struct Threads {
  Threads() {
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
  }
} const force_threads;

}  // namespace

TEST_CASE("index helpers keep order and propagate errors") {
  auto s = map_index<double>(Exec::Serial, 100, [](std::size_t i) { return 1.0 / (1.0 + i); });
  auto p = map_index<double>(Exec::OpenMP, 100, [](std::size_t i) { return 1.0 / (1.0 + i); });
  CHECK(s == p);
  CHECK(max_over(Exec::OpenMP, 100, [](std::size_t i) { return double(i % 37); }) == 36.0);
  CHECK_THROWS_AS(for_each_index(Exec::OpenMP, 50,
                                 [](std::size_t i) {
                                   if (i == 17) throw DomainError("boom");
                                 }),
                  DomainError);
}

TEST_CASE("Dirac sweeps agree between serial and OpenMP") {
  Rng rng(1);
  auto model = dirac::two_particle_model();
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 6; ++k) pts.push_back(dirac::sample_on_shell(model, rng, 0.0));
  auto a = dirac::consistency_sweep(model.set, pts, 1, Exec::Serial);
  auto b = dirac::consistency_sweep(model.set, pts, 1, Exec::OpenMP);
  CHECK(a.casimir_max == b.casimir_max);
  CHECK(a.poincare_max == b.poincare_max);
  CHECK(a.jacobi_max == b.jacobi_max);
  CHECK(dirac::dirac_jacobi_max(model.set, pts[1], Exec::Serial) ==
        dirac::dirac_jacobi_max(model.set, pts[1], Exec::OpenMP));
}

TEST_CASE("run-all is independent of scheduling") {
  cli::ScenarioConfig base;
  auto s = cli::run_all("", base, Exec::Serial);
  auto p = cli::run_all("", base, Exec::OpenMP);
  REQUIRE(s.reports.size() == p.reports.size());
  for (std::size_t i = 0; i < s.reports.size(); ++i) {
    CHECK(s.reports[i].name == p.reports[i].name);
    CHECK(s.reports[i].to_json().dump() == p.reports[i].to_json().dump());
  }
}
