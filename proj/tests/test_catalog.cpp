// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geored/calc.hpp"
#include "geored/catalog.hpp"

using namespace geored;
using namespace geored::catalog;

TEST_CASE("free particle") {
  auto s = free_particle_3d();
  CHECK(s(0.0, State{1, 0, 0, 0, 1, 0}) == State{0, 1, 0, 0, 0, 0});
}

TEST_CASE("radial systems") {
  CHECK(radial_fixed_l(0.0)(0.0, State{2.0, 0.3})[1] == 0.0);
  CHECK(radial_fixed_l(1.0)(0.0, State{1.0, 0.0})[1] == 1.0);
  CHECK(radial_fixed_E(0.0)(0.0, State{1.7, 0.0})[1] == 0.0);
  CHECK(radial_fixed_E(1.0)(0.0, State{1.0, 0.0})[1] == 2.0);
  auto tr = flow::integrate(radial_fixed_l(1.0), {1.0, 0.0}, 0.0, 2.0);
  CHECK(std::abs(tr.back()[0] - std::sqrt(5.0)) < 1e-8);
}

TEST_CASE("fixed energy against the full flow") {
  const double E = 0.8;
  State x0{1.0, 0.3, -0.4, 0.0, 0.0, 0.0};
  Eigen::Vector3d v(0.2, 0.9, 0.5);
  v *= std::sqrt(2 * E) / v.norm();
  for (int i = 0; i < 3; ++i) x0[3 + i] = v[i];
  auto full = flow::integrate(free_particle_3d(), x0, 0.0, 3.0);
  const double r0 = std::sqrt(x0[0] * x0[0] + x0[1] * x0[1] + x0[2] * x0[2]);
  const double rd0 = (x0[0] * x0[3] + x0[1] * x0[4] + x0[2] * x0[5]) / r0;
  auto red = flow::integrate(radial_fixed_E(E), {r0, rd0}, 0.0, 3.0);
  for (double t : {0.7, 1.9, 3.0}) {
    auto x = full.at(t);
    CHECK(std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - red.at(t)[0]) < 1e-7);
  }
}

TEST_CASE("convex combination limits") {
  // the reference numerator carries alpha k^2, so alpha = 1 recovers l = k
  CHECK(radial_convex(1.0, 1.0, 0.3)(0.0, State{1.0, 0.4})[1] == doctest::Approx(radial_fixed_l(1.0)(0.0, State{1.0, 0.4})[1]));
  CHECK(radial_convex(1.0, 1.7, 0.3)(0.0, State{1.3, 0.4})[1] ==
        doctest::Approx(radial_fixed_l(1.7)(0.0, State{1.3, 0.4})[1]));
  CHECK(radial_convex(0.0, 1.7, 0.3)(0.0, State{1.3, 0.4})[1] ==
        doctest::Approx(radial_fixed_E(0.3)(0.0, State{1.3, 0.4})[1]));
  CHECK_THROWS_AS(radial_convex(1.5, 1, 1), DomainError);
}

TEST_CASE("time-dependent radial force") {
  auto p = radial_time_dependent(1.0);
  CHECK(p(1.0, State{1.0, 0.0})[1] == 0.0);
  CHECK(radial_time_dependent(2.0)(1.0, State{1.0, 0.0})[1] == 3.0);
  CHECK_THROWS_AS(p(0.0, State{1.0, 0.0}), SingularTime);

  // full free flow with |r - v t|^2 = k^2, matched at t = 1
  State x0{1.0, 0.2, 0.0, 0.3, 0.5, -0.2};  // state at t = 1
  Eigen::Vector3d r(x0[0], x0[1], x0[2]), v(x0[3], x0[4], x0[5]);
  const double k = (r - v).norm();
  auto full = flow::integrate(free_particle_3d(), x0, 1.0, 3.0);
  const double r0 = r.norm(), rd0 = r.dot(v) / r0;
  auto redo = flow::integrate(radial_time_dependent_rederived(k), {r0, rd0}, 1.0, 3.0);
  auto reference = flow::integrate(radial_time_dependent(k), {r0, rd0}, 1.0, 3.0);
  double dev_re = 0.0, dev_pr = 0.0;
  for (double t = 1.0; t <= 3.0; t += 0.05) {
    auto x = full.at(t);
    const double rr = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    dev_re = std::max(dev_re, std::abs(rr - redo.at(t)[0]));
    dev_pr = std::max(dev_pr, std::abs(rr - reference.at(t)[0]));
  }
  CHECK(dev_re < 1e-6);
  MESSAGE("reference time-dependent force deviates from the full flow by " << dev_pr);
  CHECK(dev_pr > 1e-3);  // the reference middle term differs whenever r != 1
}

TEST_CASE("symmetric matrix motion") {
  auto sys = matrix_free_symmetric();
  State x0{0.3, -0.8, 1.1, 0.2, 0.5, -0.4};
  auto tr = flow::integrate(sys, x0, 0.0, 10.0);
  auto M0 = commutator_M(x0);
  for (const auto& x : tr.states) CHECK((commutator_M(x) - M0).cwiseAbs().maxCoeff() < 1e-10);
  // M is a multiple of alpha
  CHECK(M0(0, 0) == doctest::Approx(0.0));
  CHECK(M0(1, 1) == doctest::Approx(0.0));
  CHECK(M0(0, 1) == doctest::Approx(-M0(1, 0)));
  const double m12 = ((x0[0] * x0[4] - x0[3] * x0[1]) + (x0[1] * x0[5] - x0[4] * x0[2])) / std::numbers::sqrt2;
  CHECK(M0(0, 1) == doctest::Approx(m12));
  CHECK(coupling_from_state(x0) == doctest::Approx(-m12));
  MESSAGE("reference coefficient " << reference_l3(x0) << " vs computed " << M0(0, 1));

  auto still = flow::integrate(sys, {0.3, -0.8, 1.1, 0, 0, 0}, 0.0, 2.0);
  CHECK(still.back() == State{0.3, -0.8, 1.1, 0, 0, 0});
}

TEST_CASE("tracked eigen decomposition") {
  auto sys = matrix_free_symmetric();
  auto diag = flow::integrate(sys, {0.0, 0.0, 1.0, 0.5, 0.0, -0.2}, 0.0, 1.0);
  auto ed = eigen_decompose_tracked(diag);
  for (const auto& s : ed) {
    CHECK(std::abs(s.phi - ed.front().phi) < 1e-12);
    CHECK(s.q1 == doctest::Approx(0.5 * s.t));
    CHECK(s.q2 == doctest::Approx(1.0 - 0.2 * s.t));
  }

  auto e = calogero_entry();
  auto tr = flow::integrate(sys, e.default_x0, 0.0, 6.0, flow::IntegratorConfig::rk4(0.01));
  auto es = eigen_decompose_tracked(tr);
  auto phi = eigenframe_angle();
  double g0 = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto& x = tr.states[k];
    CHECK(std::abs(es[k].q1 + es[k].q2 - (x[0] + x[2])) < 1e-12);
    const double phid = calc::lie_derivative(sys.field, phi, x);
    const double d = es[k].q2 - es[k].q1;
    const double g = phid * d * d;
    if (k == 0) g0 = g;
    CHECK(std::abs(g - g0) < 1e-8);
    CHECK(std::abs(std::abs(g) - std::abs(coupling_from_state(x))) < 1e-8);
  }
  for (std::size_t k = 1; k < es.size(); ++k) CHECK(std::abs(es[k].phi - es[k - 1].phi) < 0.1);

  auto degenerate = flow::integrate(sys, {1.0, 0.0, 1.0, 0.0, 0.0, 0.0}, 0.0, 1.0);
  CHECK_THROWS_AS(eigen_decompose_tracked(degenerate), DegenerateSpectrum);
}

TEST_CASE("calogero two-body") {
  auto free = calogero_two_body(0.0)(0.0, State{0.0, 1.0, 0.3, 0.1});
  CHECK(free[2] == 0.0);
  CHECK(free[3] == 0.0);
  auto f = calogero_two_body(1.0)(0.0, State{0.0, 1.0, 0.0, 0.0});
  CHECK(f[2] == -2.0);
  CHECK(f[3] == 2.0);
  auto tr = flow::integrate(calogero_two_body(0.5), {0.0, 1.0, 0.3, -0.1}, 0.0, 4.0);
  for (std::size_t k = 0; k < tr.size(); k += 10) {
    const double t = tr.times[k];
    CHECK(std::abs(tr.states[k][0] + tr.states[k][1] - (1.0 + 0.2 * t)) < 1e-9);
  }
}

TEST_CASE("rotation-invariant reduction") {
  auto zero = [](auto r, auto) {
    using T = std::remove_cvref_t<decltype(r[0])>;
    return std::vector<T>(3, T(0.0));
  };
  auto red = so3_reduced(zero);
  auto d = red(0.0, State{2.0, 0.5, 0.3});
  CHECK(d[0] == doctest::Approx(0.6));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == doctest::Approx(0.5));

  // xi2 fixed to k: constant force of strength 2k in (xi1, 2 xi3)
  const double k = 0.4;
  auto tr = flow::integrate(red, {1.0, k, 0.1}, 0.0, 3.0);
  for (double t : {1.0, 2.0, 3.0}) {
    auto x = tr.at(t);
    CHECK(std::abs(x[0] - (1.0 + 0.2 * t + k * t * t)) < 1e-9);
    CHECK(std::abs(x[1] - k) < 1e-12);
  }

  // eta = sqrt(xi1) obeys eta'' = l^2 / eta^3 with l^2 = xi1 xi2 - xi3^2
  State xi0{1.2, 0.9, 0.4};
  const double l2 = xi0[0] * xi0[1] - xi0[2] * xi0[2];
  auto tr2 = flow::integrate(red, xi0, 0.0, 2.0);
  auto eta = flow::integrate(radial_fixed_l(std::sqrt(l2)), {std::sqrt(xi0[0]), xi0[2] / std::sqrt(xi0[0])}, 0.0, 2.0);
  for (double t : {0.5, 1.0, 2.0}) CHECK(std::abs(std::sqrt(tr2.at(t)[0]) - eta.at(t)[0]) < 1e-8);
}

TEST_CASE("riccati and the linear planar flow") {
  CHECK(riccati_scalar(0, 0, 0)(0.0, State{0.7})[0] == 0.0);
  CHECK(riccati_scalar(1, 1, 1)(0.0, State{1.0})[0] == 2.0);
  auto tr = flow::integrate(riccati_scalar(1, 0, 0), {1.0}, 0.0, 3.0);
  for (double t : {0.5, 1.5, 3.0}) CHECK(std::abs(tr.at(t)[0] - 1.0 / (1.0 + t)) < 1e-9);

  const double a = 0.5, b = 0.3, c = 0.2;
  auto lin = linear_2d(a, b, c);
  auto euler = VectorFieldFn::make(2, "Euler", [](auto x) { return std::vector{x[0], x[1]}; });
  for (double v : calc::field_commutator(lin.field, euler, State{0.3, -1.2})) CHECK(std::abs(v) < 1e-15);

  // both charts against their scalar equations
  auto pl = flow::integrate(lin, {0.4, 1.0}, 0.0, 4.0);
  auto track = project_linear_2d(pl);
  CHECK(track.switch_times.size() == 1);
  auto xi = flow::integrate(riccati_scalar(a, b, c), {0.4}, 0.0, 4.0);
  const double ts = track.switch_times.front();
  auto zeta = flow::integrate(riccati_scalar_zeta(a, b, c), {pl.at(ts)[1] / pl.at(ts)[0]}, ts, 4.0);
  for (const auto& s : track.samples) {
    if (s.chart == 0) CHECK(std::abs(s.value - xi.at(s.t)[0]) < 1e-8);
    if (s.chart == 1 && s.t > ts) CHECK(std::abs(s.value - zeta.at(s.t)[0]) < 1e-8);
  }
  flow::Trajectory origin;
  origin.times = {0.0};
  origin.states = {{0.0, 0.0}};
  CHECK_THROWS_AS(project_linear_2d(origin), OriginExcluded);
}

TEST_CASE("cross ratio of four solutions is constant") {
  auto lin = linear_2d(0.5, 0.3, 0.2);
  std::vector<flow::Trajectory> tr;
  for (State x0 : {State{0.4, 1.0}, State{-0.3, 1.0}, State{1.2, 0.8}, State{0.1, -0.9}})
    tr.push_back(flow::integrate(lin, x0, 0.0, 2.0));
  auto cr = [&](double t) {
    double z[4];
    for (int i = 0; i < 4; ++i) {
      auto p = tr[i].at(t);
      z[i] = p[0] / p[1];
    }
    return (z[0] - z[2]) * (z[1] - z[3]) / ((z[0] - z[3]) * (z[1] - z[2]));
  };
  const double c0 = cr(0.0);
  for (double t : {0.5, 1.0, 1.5, 2.0}) CHECK(std::abs(cr(t) - c0) < 1e-8);
}

TEST_CASE("catalog entries") {
  auto all = entries();
  REQUIRE(all.size() == 5);
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].name < all[i].name);
  for (const auto& e : all) {
    CAPTURE(e.name);
    auto loose = reduce::verify_commuting_diagram(e.scenario, e.default_x0, e.t0, e.t1, flow::IntegratorConfig::rk45(1e-8), 1, e.stop);
    auto tight = reduce::verify_commuting_diagram(e.scenario, e.default_x0, e.t0, e.t1, flow::IntegratorConfig::rk45(1e-10), 1, e.stop);
    CHECK(tight.max_dev < 1e-6);
    CHECK(loose.max_dev >= 10.0 * tight.max_dev);
    CHECK(e.config["name"] == e.name);

    // forward then backward returns to the start
    auto fwd = flow::integrate(e.scenario.system, e.default_x0, e.t0, e.t1);
    auto back = flow::integrate(flow::reversed(e.scenario.system), fwd.back(), -e.t1, -e.t0);
    double err = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < e.default_x0.size(); ++i) {
      err = std::max(err, std::abs(back.back()[i] - e.default_x0[i]));
      scale = std::max(scale, std::abs(fwd.back()[i]));
    }
    CHECK(err < 10.0 * 1e-10 * scale * 10.0);
  }
}
