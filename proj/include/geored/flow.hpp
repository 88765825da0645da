// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geored/field.hpp"

namespace geored::flow {

using State = std::vector<double>;
using RhsFn = std::function<State(double t, std::span<const double> x)>;

struct VectorFieldSystem {
  std::size_t dim = 0;
  RhsFn rhs;
  VectorFieldFn field;  // set for autonomous systems; enables derivative checks
  std::vector<std::string> coord_names;
  bool autonomous = true;
  std::string label;

  State operator()(double t, std::span<const double> x) const { return rhs(t, x); }

  static VectorFieldSystem from_field(VectorFieldFn f, std::vector<std::string> names = {});
  static VectorFieldSystem non_autonomous(std::size_t dim, std::string label, RhsFn rhs,
                                          std::vector<std::string> names = {});
};

// dx/dt = -rhs(-t, x); integrating it over [-t1, -t0] runs the original backwards.
VectorFieldSystem reversed(const VectorFieldSystem& sys);

enum class Method { RK4, RK45 };

struct IntegratorConfig {
  Method method = Method::RK45;
  double dt = 1e-3;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long long max_steps = 10'000'000;
  double blowup = 1e12;
  // Applied to every accepted state, e.g. re-projection onto a manifold.
  std::function<void(double t, State& x)> projector;

  void validate() const;
  static IntegratorConfig rk4(double dt) {
    IntegratorConfig c;
    c.method = Method::RK4;
    c.dt = dt;
    return c;
  }
  static IntegratorConfig rk45(double tol) {
    IntegratorConfig c;
    c.abs_tol = tol;
    c.rel_tol = tol;
    return c;
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<State> derivs;
  // Per-step continuous extension coefficients (RK45 without projector).
  std::vector<std::array<State, 5>> dense;
  Method method = Method::RK45;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  double dt = 0.0;
  long long rejected = 0;

  std::size_t size() const { return times.size(); }
  const State& back() const { return states.back(); }
  double t0() const { return times.front(); }
  double t1() const { return times.back(); }

  // Interpolated state inside [t0, t1].
  State at(double t) const;
  // Uniform grid of n points spanning [t0, t1].
  std::vector<double> uniform_grid(std::size_t n) const;
};

Trajectory integrate(const VectorFieldSystem& sys, const State& x0, double t0, double t1,
                     const IntegratorConfig& cfg = {});

double conserved_drift(const VectorFieldSystem& sys, const ScalarField& f, const Trajectory& traj);

// (q, v) -> (v, force(q, v, t)). The force must accept spans of any scalar
// type; t is passed as 0 when evaluated through the autonomous field.
template <class F>
VectorFieldSystem second_order_lift(std::size_t n, F force, std::string label = "second-order",
                                    bool autonomous = true) {
  auto make = [n, force](auto x, double t) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    std::span<const T> q = x.subspan(0, n);
    std::span<const T> v = x.subspan(n, n);
    auto a = force(q, v, t);
    std::vector<T> out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = v[i];
      out[n + i] = T(a[i]);
    }
    return out;
  };
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  if (autonomous) {
    auto fld = VectorFieldFn::make<2>(2 * n, label, [make](auto x) { return make(x, 0.0); });
    return VectorFieldSystem::from_field(fld, names);
  }
  return VectorFieldSystem::non_autonomous(
      2 * n, label, [make](double t, std::span<const double> x) { return make(x, t); }, names);
}

// CSV with header "t,<coord names>" and 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& names);
void write_csv(const std::string& path, const Trajectory& traj, const std::vector<std::string>& names);

}  // namespace geored::flow
