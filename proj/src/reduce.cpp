// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/reduce.hpp"

#include <algorithm>
#include <cmath>

#include "geored/calc.hpp"

namespace geored::reduce {

namespace {

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double InvariantSurface::violation(std::span<const double> x) const {
  if (constraints.size() != values.size()) throw DomainError("surface constraints and values differ in length");
  double m = 0.0;
  for (std::size_t j = 0; j < constraints.size(); ++j) m = std::max(m, std::abs(constraints[j](x) - values[j]));
  return m;
}

State QuotientMap::operator()(std::span<const double> x) const {
  State r(invariants.size());
  for (std::size_t i = 0; i < invariants.size(); ++i) r[i] = invariants[i](x);
  return r;
}

CheckReport check_invariant_surface(const VectorFieldSystem& sys, const InvariantSurface& surface,
                                    const std::vector<State>& samples, double tol, double t) {
  CheckReport rep;
  for (const auto& x : samples) {
    for (std::size_t j = 0; j < surface.constraints.size(); ++j) {
      if (std::abs(surface.constraints[j](x) - surface.values[j]) > surface.tol)
        throw OffSurface("sample is not on the surface", j);
    }
    const State v = sys(t, x);
    const double scale = 1.0 + norm_inf(v);
    for (const auto& K : surface.constraints) {
      auto g = calc::gradient(K, x);
      double lk = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) lk += g[i] * v[i];
      rep.worst = std::max(rep.worst, std::abs(lk));
      if (std::abs(lk) > tol * scale) rep.ok = false;
    }
    ++rep.samples;
  }
  return rep;
}

State reduced_field(const VectorFieldSystem& sys, const QuotientMap& quotient, const State& representative,
                    double t) {
  for (double v : representative)
    if (!std::isfinite(v)) throw EvaluationError("representative is not finite");
  Eigen::MatrixXd J = calc::jacobian(quotient.invariants, representative);
  const State v = sys(t, representative);
  Eigen::Map<const Eigen::VectorXd> ev(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::VectorXd r = J * ev;
  return {r.data(), r.data() + r.size()};
}

CheckReport check_projectable(const VectorFieldSystem& sys, const QuotientMap& quotient,
                              const std::vector<std::pair<State, State>>& pairs, double tol, double t) {
  CheckReport rep;
  for (const auto& [m, mp] : pairs) {
    const State a = quotient(m), b = quotient(mp);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > tol * (1.0 + std::abs(a[i])))
        throw PairNotEquivalent("invariant " + std::to_string(i) + " differs by " + std::to_string(a[i] - b[i]));
    const State ra = reduced_field(sys, quotient, m, t), rb = reduced_field(sys, quotient, mp, t);
    for (std::size_t i = 0; i < ra.size(); ++i) {
      const double d = std::abs(ra[i] - rb[i]);
      rep.worst = std::max(rep.worst, d);
      if (d > tol * (1.0 + std::abs(ra[i]))) rep.ok = false;
    }
    ++rep.samples;
  }
  return rep;
}

DiagramReport verify_commuting_diagram(const ReductionScenario& sc, const State& x0, double t0, double t1,
                                       const flow::IntegratorConfig& cfg, std::uint64_t seed,
                                       const std::function<bool(const State&)>& stop) {
  if (!sc.quotient) throw DomainError("scenario '" + sc.name + "' has no quotient map to compare through");
  const QuotientMap& xi = *sc.quotient;
  if (xi.size() != sc.reduced.dim) throw DomainError("reduced dimension does not match the quotient");
  DiagramReport rep;
  rep.scenario = sc.name;
  rep.t0 = t0;
  rep.t1 = t1;
  rep.tolerances = sc.tol;

  Rng rng(seed);
  std::vector<State> points{x0};
  for (std::size_t k = 1; k < sc.sample_count && sc.sample_point; ++k) points.push_back(sc.sample_point(rng));
  if (sc.surface) {
    if (!sc.surface->contains(x0)) throw OffSurface("initial point is not on the surface", 0);
    rep.surface = check_invariant_surface(sc.system, *sc.surface, points, sc.tol.surface, t0);
    if (!rep.surface.ok)
      throw PreflightFailed("surface of '" + sc.name + "' is not invariant (worst " +
                            std::to_string(rep.surface.worst) + ")");
  }
  if (sc.equivalent_point) {
    std::vector<std::pair<State, State>> pairs;
    for (const auto& p : points) pairs.emplace_back(p, sc.equivalent_point(rng, p));
    rep.projectable = check_projectable(sc.system, xi, pairs, sc.tol.projectable, t0);
    if (!rep.projectable.ok)
      throw PreflightFailed("quotient of '" + sc.name + "' is not projectable (worst " +
                            std::to_string(rep.projectable.worst) + ")");
  }

  const auto full = flow::integrate(sc.system, x0, t0, t1, cfg);
  const auto red = flow::integrate(sc.reduced, xi(x0), t0, t1, cfg);
  rep.grid = full.uniform_grid(sc.grid_points);
  for (double t : rep.grid) {
    State a = xi(full.at(t));
    if (stop && stop(a)) break;
    State b = red.at(t);
    for (std::size_t i = 0; i < a.size(); ++i) rep.max_dev = std::max(rep.max_dev, std::abs(a[i] - b[i]));
    rep.projected.push_back(std::move(a));
    rep.direct.push_back(std::move(b));
  }
  rep.grid.resize(rep.projected.size());
  rep.samples = rep.grid.size();
  rep.ok = rep.max_dev <= sc.tol.diagram;
  return rep;
}

nlohmann::json to_json(const DiagramReport& r) {
  return {{"scenario", r.scenario},
          {"max_dev", r.max_dev},
          {"ok", r.ok},
          {"samples", r.samples},
          {"tolerances",
           {{"surface", r.tolerances.surface},
            {"projectable", r.tolerances.projectable},
            {"diagram", r.tolerances.diagram}}}};
}

}  // namespace geored::reduce
