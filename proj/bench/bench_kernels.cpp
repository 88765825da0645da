// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "geored/dirac.hpp"
#include "geored/parallel.hpp"

using namespace geored;

namespace {

struct Fixture {
  dirac::TwoParticleModel model = dirac::two_particle_model();
  std::vector<std::vector<double>> points;
  Fixture() {
    Rng rng(7);
    for (int k = 0; k < 8; ++k) points.push_back(dirac::sample_on_shell(model, rng, 0.0));
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::OpenMP; }

void BM_DiracJacobi(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(dirac::dirac_jacobi_max(f.model.set, f.points[0], exec_of(st)));
  st.SetLabel(st.range(0) == 0 ? "serial" : "openmp");
}

void BM_ConsistencySweep(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) {
    auto s = dirac::consistency_sweep(f.model.set, f.points, 0, exec_of(st));
    benchmark::DoNotOptimize(s.casimir_max);
  }
  st.SetLabel(st.range(0) == 0 ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_DiracJacobi)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConsistencySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
