// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geored/field.hpp"
#include "geored/flow.hpp"
#include "geored/random.hpp"

namespace geored::reduce {

using flow::State;
using flow::VectorFieldSystem;

struct InvariantSurface {
  std::vector<ScalarField> constraints;
  std::vector<double> values;
  double tol = 1e-8;

  // Largest |K_j(x) - k_j|.
  double violation(std::span<const double> x) const;
  bool contains(std::span<const double> x) const { return violation(x) <= tol; }
};

struct QuotientMap {
  std::vector<ScalarField> invariants;
  std::vector<std::string> names;

  std::size_t size() const { return invariants.size(); }
  State operator()(std::span<const double> x) const;
};

struct Tolerances {
  double surface = 1e-8;      // |L_X K| relative to (1 + |X|)
  double projectable = 1e-8;  // pushed-forward velocity mismatch
  double diagram = 1e-6;      // max deviation of the two flows
};

struct CheckReport {
  bool ok = true;
  double worst = 0.0;
  std::size_t samples = 0;
};

struct ReductionScenario {
  std::string name;
  VectorFieldSystem system;
  std::optional<InvariantSurface> surface;
  std::optional<QuotientMap> quotient;
  VectorFieldSystem reduced;
  std::size_t sample_count = 64;
  std::size_t grid_points = 512;
  Tolerances tol;
  // Random point on the surface (or ambient space when there is none).
  std::function<State(Rng&)> sample_point;
  // Random point equivalent to the given one under the quotient relation.
  std::function<State(Rng&, const State&)> equivalent_point;
};

CheckReport check_invariant_surface(const VectorFieldSystem& sys, const InvariantSurface& surface,
                                    const std::vector<State>& samples, double tol, double t = 0.0);

CheckReport check_projectable(const VectorFieldSystem& sys, const QuotientMap& quotient,
                              const std::vector<std::pair<State, State>>& pairs, double tol, double t = 0.0);

// D xi(x) . X(x)
State reduced_field(const VectorFieldSystem& sys, const QuotientMap& quotient, const State& representative,
                    double t = 0.0);

struct DiagramReport {
  std::string scenario;
  double max_dev = 0.0;
  bool ok = false;
  std::size_t samples = 0;
  CheckReport surface;
  CheckReport projectable;
  double t0 = 0.0;
  double t1 = 0.0;
  Tolerances tolerances;
  std::vector<double> grid;
  std::vector<State> projected;  // quotient of the ambient flow on the grid
  std::vector<State> direct;     // reduced flow on the grid
};

// Runs both preflight checks (throws PreflightFailed when either fails), then
// compares the projected ambient flow with the reduced flow on a shared grid.
// A stop predicate on the projected state truncates the comparison window.
DiagramReport verify_commuting_diagram(const ReductionScenario& sc, const State& x0, double t0, double t1,
                                       const flow::IntegratorConfig& cfg, std::uint64_t seed = 1,
                                       const std::function<bool(const State&)>& stop = {});

nlohmann::json to_json(const DiagramReport& r);

}  // namespace geored::reduce
