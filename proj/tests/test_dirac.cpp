// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geored/dirac.hpp"

using namespace geored;
using namespace geored::dirac;

namespace {

const double kEta[4] = {1.0, -1.0, -1.0, -1.0};

double mink(const double* a, const double* b) {
  double s = 0.0;
  for (int mu = 0; mu < 4; ++mu) s += kEta[mu] * a[mu] * b[mu];
  return s;
}

// Random single-particle point on p^2 = m^2 (tau appended).
std::vector<double> single_on_shell(Rng& rng, double m, double tau) {
  std::vector<double> z(9);
  for (int i = 0; i < 4; ++i) z[i] = rng.uniform(-1, 1);
  double s = m * m;
  for (int j = 1; j < 4; ++j) {
    z[4 + j] = rng.uniform(-0.7, 0.7);
    s += z[4 + j] * z[4 + j];
  }
  z[4] = std::sqrt(s);
  z[8] = tau;
  return z;
}

}  // namespace

TEST_CASE("canonical brackets on phase space") {
  PhaseSpace sp{1, {}};
  Rng rng(1);
  auto z = rng.uniform_vec(9, -1, 1);
  CHECK(canonical_pb(sp, sp.x_field(0, 0), sp.p_field(0, 0), z) == 1.0);
  CHECK(canonical_pb(sp, sp.x_field(0, 1), sp.p_field(0, 1), z) == -1.0);
  CHECK(canonical_pb(sp, sp.x_field(0, 1), sp.p_field(0, 2), z) == 0.0);
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) {
      CHECK(canonical_pb(sp, sp.x_field(0, mu), sp.x_field(0, nu), z) == 0.0);
      CHECK(canonical_pb(sp, sp.p_field(0, mu), sp.p_field(0, nu), z) == 0.0);
    }
  PhaseSpace sp2{2, {}};
  auto z2 = rng.uniform_vec(17, -1, 1);
  CHECK(canonical_pb(sp2, sp2.x_field(0, 2), sp2.p_field(1, 2), z2) == 0.0);
  CHECK(canonical_pb(sp2, sp2.x_field(1, 3), sp2.p_field(1, 3), z2) == -1.0);
  CHECK_THROWS_AS(canonical_pb(sp2, sp.x_field(0, 0), sp2.p_field(0, 0), z2), EvaluationError);
}

TEST_CASE("Poincare generators") {
  PhaseSpace sp{1, {}};
  auto G = poincare_generators(sp);
  REQUIRE(G.J.size() == 6);
  REQUIRE(G.P.size() == 4);
  Rng rng(2);
  auto z = rng.uniform_vec(9, -1, 1);
  for (std::size_t i = 0; i < 6; ++i) {
    auto [mu, nu] = G.J_index[i];
    const double xm = kEta[mu] * z[mu], xn = kEta[nu] * z[nu];
    const double pm = kEta[mu] * z[4 + mu], pn = kEta[nu] * z[4 + nu];
    CHECK(G.J[i](z) == doctest::Approx(xm * pn - xn * pm));
  }
  for (std::size_t mu = 0; mu < 4; ++mu) CHECK(G.P[mu](z) == doctest::Approx(kEta[mu] * z[4 + mu]));

  // Lorentz algebra closes with the structure constants of the l-sector.
  auto dp = deformed_poincare(1.0);
  PhaseSpace sp2{2, {}};
  auto G2 = poincare_generators(sp2);
  auto z2 = rng.uniform_vec(17, -1, 1);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double predicted = 0.0;
      for (std::size_t k = 0; k < 6; ++k) predicted += dp.c[4 + i][4 + j][4 + k] * G2.J[k](z2);
      CHECK(canonical_pb(sp2, G2.J[i], G2.J[j], z2) == doctest::Approx(predicted).epsilon(1e-12));
    }
  // {J01, J12} = J02
  CHECK(canonical_pb(sp2, G2.J[0], G2.J[3], z2) == doctest::Approx(G2.J[1](z2)));

  // mass shell is Poincare invariant
  auto fp = free_particle(1.3);
  for (int k = 0; k < 5; ++k) {
    auto w = single_on_shell(rng, 1.3, 0.0);
    for (const auto& J : G.J) CHECK(std::abs(canonical_pb(sp, fp.constraints[0].f, J, w)) < 1e-12);
    for (const auto& P : G.P) CHECK(std::abs(canonical_pb(sp, fp.constraints[0].f, P, w)) < 1e-12);
  }
}

TEST_CASE("constraint matrix") {
  Rng rng(3);
  // K = p^2 - m^2, chi = p.x - tau
  PhaseSpace sp{1, {}};
  ConstraintSet cov{sp,
                    {free_particle(1.5).constraints[0],
                     {"chi", ScalarField::make(9, "chi", [](auto z) {
                        return z[4] * z[0] - z[5] * z[1] - z[6] * z[2] - z[7] * z[3] - z[8];
                      }),
                      true, Role::GAUGE}}};
  for (int k = 0; k < 5; ++k) {
    auto z = single_on_shell(rng, 1.5, 0.3);
    const double px = mink(&z[4], &z[0]);
    const double p2 = mink(&z[4], &z[4]);
    for (int mu = 0; mu < 4; ++mu) z[mu] += (0.3 - px) / p2 * z[4 + mu];
    auto C = constraint_matrix(cov, z);
    CHECK(C(1, 0) == doctest::Approx(2.0 * 1.5 * 1.5));
    CHECK(C(0, 1) == doctest::Approx(-2.0 * 1.5 * 1.5));
    CHECK(C(0, 0) == 0.0);
  }

  auto model0 = two_particle_model(1.0, 2.0, InteractionPotential::zero());
  auto model = two_particle_model();
  for (int k = 0; k < 10; ++k) {
    auto z0 = sample_on_shell(model0, rng, 0.2);
    auto B0 = cross_block(model0, z0);
    const double p1p1 = mink(&z0[4], &z0[4]), p1p2 = mink(&z0[4], &z0[12]);
    CHECK(B0(0, 0) == doctest::Approx(p1p1 + p1p2).epsilon(1e-12));

    auto z = sample_on_shell(model, rng, 0.2);
    auto B = cross_block(model, z);
    double P[4];
    for (int mu = 0; mu < 4; ++mu) P[mu] = z[4 + mu] + z[12 + mu];
    const double Pp1 = mink(P, &z[4]), Pp2 = mink(P, &z[12]);
    // hand-evaluated canonical brackets: chi1 and chi2 commute with xi
    CHECK(B(0, 0) == doctest::Approx(Pp1).epsilon(1e-10));
    CHECK(B(0, 1) == doctest::Approx(-Pp2).epsilon(1e-10));
    CHECK(B(1, 0) == doctest::Approx(Pp1).epsilon(1e-10));
    CHECK(B(1, 1) == doctest::Approx(Pp2).epsilon(1e-10));
    CHECK(B.determinant() == doctest::Approx(2.0 * Pp1 * Pp2).epsilon(1e-10));
    auto C = constraint_matrix(model.set, z);
    CHECK(C.rows() == 4);
    CHECK((C + C.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    if (k == 0) {
      MESSAGE("block det " << B.determinant() << " reference pattern " << reference_determinant(model, z));
      MESSAGE("block\n" << B << "\nreference\n" << reference_block(model, z));
    }
  }
  auto z = sample_on_shell(model, rng, 0.0);
  z[0] += 0.1;
  CHECK_THROWS_AS(constraint_matrix(model.set, z), OffSurface);
}

TEST_CASE("Dirac bracket") {
  Rng rng(4);
  auto fp = free_particle(1.0);
  auto z = single_on_shell(rng, 1.0, 0.4);
  z[0] = 0.4;
  const auto& sp = fp.space;
  CHECK(dirac_bracket(fp, sp.x_field(0, 1), sp.p_field(0, 1), z) == doctest::Approx(-1.0));
  // the time coordinate is frozen by the gauge
  CHECK(std::abs(dirac_bracket(fp, sp.x_field(0, 0), sp.p_field(0, 0), z)) < 1e-14);

  auto model = two_particle_model();
  auto coords = model.set.space.coordinates();
  auto PD = dirac_tensor(model.set);
  for (int k = 0; k < 20; ++k) {
    auto w = sample_on_shell(model, rng, rng.uniform(-1, 1));
    double worst = 0.0;
    for (const auto& c : model.set.constraints)
      for (const auto& f : coords) worst = std::max(worst, std::abs(bracket(PD, f, c.f, w)));
    CHECK(worst < 1e-9);
    for (std::size_t i = 0; i < 16; i += 3)
      for (std::size_t j = 0; j < 16; j += 5)
        CHECK(std::abs(bracket(PD, coords[i], coords[j], w) + bracket(PD, coords[j], coords[i], w)) < 1e-14);
  }
  auto w = sample_on_shell(model, rng, 0.0);
  double worst = 0.0;
  for (std::size_t a = 0; a < 16; a += 2)
    for (std::size_t b = a + 1; b < 16; b += 3)
      for (std::size_t d = b + 1; d < 16; d += 4)
        worst = std::max(worst, jacobi_residual(PD, coords[a], coords[b], coords[d], w));
  CHECK(worst < 1e-6);
}

TEST_CASE("Poincare brackets agree under canonical and Dirac brackets") {
  Rng rng(5);
  auto model = two_particle_model();
  auto G = poincare_generators(model.set.space);
  std::vector<ScalarField> gens = G.J;
  gens.insert(gens.end(), G.P.begin(), G.P.end());
  auto PC = canonical_tensor(model.set.space);
  auto PD = dirac_tensor(model.set);
  for (int k = 0; k < 5; ++k) {
    auto z = sample_on_shell(model, rng, 0.5);
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        CHECK(std::abs(bracket(PC, gens[i], gens[j], z) - bracket(PD, gens[i], gens[j], z)) < 1e-8);
  }
}

TEST_CASE("two-particle model") {
  Rng rng(6);
  auto m0 = two_particle_model(1.0, 2.0, InteractionPotential::zero());
  for (int k = 0; k < 5; ++k) {
    auto z = rng.uniform_vec(17, -1, 1);
    CHECK(canonical_pb(m0.set.space, m0.set.constraints[0].f, m0.set.constraints[1].f, z) == 0.0);
  }
  auto model = two_particle_model();
  auto G = poincare_generators(model.set.space);
  for (int k = 0; k < 20; ++k) {
    auto z = sample_on_shell(model, rng, 0.1 * k);
    CHECK(model.set.violation(z) < 1e-11);
    CHECK(std::abs(canonical_pb(model.set.space, model.set.constraints[0].f, model.set.constraints[1].f, z)) <
          1e-12);
    for (const auto& J : G.J) CHECK(std::abs(canonical_pb(model.set.space, model.xi, J, z)) < 1e-9);
    for (const auto& P : G.P) CHECK(std::abs(canonical_pb(model.set.space, model.xi, P, z)) < 1e-9);
    for (const auto& c : model.set.constraints) CHECK((tau_sensitivity(c, z) > 0.5) == c.tau_dependent);
  }
  auto V = InteractionPotential::linear(0.1);
  for (double xi : {-0.7, 0.0, 1.3}) {
    const double fd = (V.value(xi + 1e-6) - V.value(xi - 1e-6)) / 2e-6;
    CHECK(std::abs(V.derivative(xi) - fd) < 1e-6);
  }
  auto kin = two_particle_model(1.0, 2.0, InteractionPotential::linear(0.1), Gauge::KINEMATICAL);
  auto zk = sample_on_shell(kin, rng, 0.7);
  CHECK(zk[0] == 0.7);
  CHECK(zk[8] == 0.7);
  CHECK(kin.set.violation(zk) < 1e-11);
}

TEST_CASE("constrained flow of a free particle") {
  Rng rng(7);
  auto fp = free_particle(1.0);
  auto z = single_on_shell(rng, 1.0, 0.0);
  z[0] = 0.0;
  std::vector<double> s(z.begin(), z.begin() + 8);
  auto run = constrained_flow(fp, s, 0.0, 3.0);
  auto end = run.traj.back();
  for (int j = 1; j < 4; ++j) {
    CHECK(end[j] == doctest::Approx(s[j] + 3.0 * s[4 + j] / s[4]).epsilon(1e-9));
    CHECK(end[4 + j] == doctest::Approx(s[4 + j]));
  }
  CHECK(end[0] == doctest::Approx(3.0));
}

TEST_CASE("constrained flow of the two-particle model") {
  Rng rng(8);
  auto m0 = two_particle_model(1.0, 2.0, InteractionPotential::zero());
  auto z0 = sample_on_shell(m0, rng, 0.0);
  std::vector<double> s0(z0.begin(), z0.begin() + 16);
  auto r0 = constrained_flow(m0.set, s0, 0.0, 2.0);
  auto c0 = r0.traj.at(0.0);
  auto a = r0.traj.at(0.5), b = r0.traj.at(1.0), c = r0.traj.at(1.5);
  for (int i = 0; i < 16; ++i) {
    if (i % 8 >= 4) {
      CHECK(a[i] == doctest::Approx(c0[i]).epsilon(1e-10));
      CHECK(c[i] == doctest::Approx(c0[i]).epsilon(1e-10));
    } else {
      CHECK(std::abs((c[i] - b[i]) - (b[i] - a[i])) < 1e-8);
    }
  }

  auto model = two_particle_model(1.0, 2.0, InteractionPotential::linear(0.3));
  auto z = sample_on_shell(model, rng, 0.0);
  std::vector<double> s(z.begin(), z.begin() + 16);
  auto run = constrained_flow(model.set, s, 0.0, 5.0);
  const auto& last = run.traj.back();
  double moved = 0.0, Pdrift = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < run.traj.size(); ++i) {
    const auto& st = run.traj.states[i];
    auto full = st;
    full.push_back(run.traj.times[i]);
    worst = std::max(worst, model.set.violation(full));
    for (int mu = 0; mu < 4; ++mu) Pdrift = std::max(Pdrift, std::abs(st[4 + mu] + st[12 + mu] - s[4 + mu] - s[12 + mu]));
  }
  for (int mu = 0; mu < 4; ++mu) moved = std::max(moved, std::abs(last[4 + mu] - s[4 + mu]));
  CHECK(moved > 1e-6);
  CHECK(Pdrift < 1e-9);
  CHECK(worst < 1e-7);
  MESSAGE("constraint drift " << run.max_drift << " projections " << run.projections);

  auto bad = s;
  bad[0] += 1e-3;
  CHECK_THROWS_AS(constrained_flow(model.set, bad, 0.0, 1.0), OffSurface);
}

TEST_CASE("positions do not commute under the Dirac bracket") {
  Rng rng(9);
  PhaseSpace sp{2, {}};
  ConstraintSet none{sp, {}};
  auto z = rng.uniform_vec(17, -1, 1);
  CHECK(position_noncommutativity(none, z).max_abs == 0.0);
  auto model = two_particle_model();
  for (int k = 0; k < 5; ++k) {
    auto w = sample_on_shell(model, rng, 0.0);
    auto t = position_noncommutativity(model.set, w);
    CHECK(t.max_abs > 1e-6);
    for (const auto& m : t.table) CHECK((m + m.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
  auto j = to_json(position_noncommutativity(model.set, sample_on_shell(model, rng, 0.0)));
  CHECK(j["tables"].size() == 2);
}

TEST_CASE("world line condition") {
  Rng rng(10);
  auto model = two_particle_model();
  for (int k = 0; k < 5; ++k) {
    auto z = sample_on_shell(model, rng, 0.0);
    Eigen::Vector4d a = Eigen::Vector4d::Random() * 1e-4;
    auto r = wlc_residual(model.set, Eigen::Matrix4d::Zero(), a, z);
    CHECK(r.max_residual < 1e-10);
    double P[4];
    for (int mu = 0; mu < 4; ++mu) P[mu] = z[4 + mu] + z[12 + mu];
    double aP = 0.0;
    for (int mu = 0; mu < 4; ++mu) aP += kEta[mu] * a(mu) * P[mu];
    for (double dt : r.delta_tau) CHECK(dt == doctest::Approx(-aP).epsilon(1e-8));
  }
  for (int k = 0; k < 10; ++k) {
    auto z = sample_on_shell(model, rng, 0.0);
    Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        w(i, j) = rng.uniform(-1, 1);
        w(j, i) = -w(i, j);
      }
    w *= 1e-4 / w.norm();
    auto r = wlc_residual(model.set, w, Eigen::Vector4d::Zero(), z);
    CHECK(r.max_residual < 1e-6 * w.norm());
  }
  auto kin = two_particle_model(1.0, 2.0, InteractionPotential::linear(0.1), Gauge::KINEMATICAL);
  auto zk = sample_on_shell(kin, rng, 0.0);
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w(0, 1) = 1e-4;
  w(1, 0) = -1e-4;
  auto rk = wlc_residual(kin.set, w, Eigen::Vector4d::Zero(), zk);
  MESSAGE("kinematical gauge WLC residual " << rk.max_residual << " relative " << rk.max_residual / w.norm());
  CHECK(std::isfinite(rk.max_residual));
}

TEST_CASE("deformed Poincare algebra") {
  for (double K : {0.1, 1.0, 100.0}) {
    auto d = deformed_poincare(K);
    CHECK(d.jacobi_residual() < 1e-12);
    CHECK(d.c[0][1][4] == doctest::Approx(1.0 / K));
    CHECK(d.c[1][0][4] == doctest::Approx(-1.0 / K));
    CHECK(d.c[2][3][9] == doctest::Approx(1.0 / K));
  }
  auto big = deformed_poincare(1e12);
  double xx = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 10; ++k) xx = std::max(xx, std::abs(big.c[i][j][k]));
  CHECK(xx < 1e-11);
  auto d = deformed_poincare(1.0);
  // {l01, x0} = eta00 x1
  std::array<double, 10> e{};
  e[1] = 1.0;
  CHECK(d.bracket(4, 0) == e);
  auto a = deformed_poincare(0.5), b = deformed_poincare(2.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 10; ++k) CHECK(a.c[i][j][k] == doctest::Approx(4.0 * b.c[i][j][k]));
  CHECK_THROWS_AS(deformed_poincare(0.0), DomainError);
  auto js = d.to_json();
  CHECK(js["basis"].size() == 10);
}

TEST_CASE("consistency sweep") {
  Rng rng(11);
  auto model = two_particle_model();
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 4; ++k) pts.push_back(sample_on_shell(model, rng, 0.1 * k));
  auto s = consistency_sweep(model.set, pts, 1);
  CHECK(s.points == 4);
  CHECK(s.casimir_max < 1e-9);
  CHECK(s.poincare_max < 1e-8);
  CHECK(s.jacobi_max < 1e-6);
  CHECK(s.jacobi_max > 0.0);
}

TEST_CASE("Jacobi detector flags a non-Poisson bivector") {
  // {x,y} = 1, {y,z} = y: the cyclic sum on (x, y, z) equals {x, y} = 1
  auto P = PoissonTensor::make(3, "broken", [](auto z) {
    using T = std::remove_cvref_t<decltype(z[0])>;
    Mat<T> m(3, 3);
    m(0, 1) = T(1.0);
    m(1, 0) = T(-1.0);
    m(1, 2) = z[1];
    m(2, 1) = -z[1];
    return m;
  });
  std::vector<double> w{0.3, -0.7, 1.1};
  CHECK(jacobi_residual(P, coordinate(3, 0), coordinate(3, 1), coordinate(3, 2), w) == doctest::Approx(1.0));
}
