// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geored::catalog {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

template <class T>
using Vec = std::vector<T>;

// (q1, q2, phi) -> (x1, x2, x3) of G Q G^T
template <class T>
std::array<T, 3> matrix_from_spectrum(const T& q1, const T& q2, const T& phi) {
  const T c = cos(phi), s = sin(phi);
  return {q1 * c * c + q2 * s * s, kSqrt2 * (q2 - q1) * s * c, q1 * s * s + q2 * c * c};
}

State calogero_state(double q1, double q2, double q1d, double q2d, double phi, double phid) {
  auto x = matrix_from_spectrum(D1(q1, q1d), D1(q2, q2d), D1(phi, phid));
  return {x[0].v, x[1].v, x[2].v, x[0].d, x[1].d, x[2].d};
}

State calogero_on_surface(double q1, double q2, double q1d, double q2d, double phi, double g) {
  const double c = coupling_from_state(calogero_state(q1, q2, q1d, q2d, phi, 1.0));
  return calogero_state(q1, q2, q1d, q2d, phi, g / c);
}

State rotate_pair(const Eigen::Matrix3d& R, const State& x) {
  Eigen::Vector3d r(x[0], x[1], x[2]), v(x[3], x[4], x[5]);
  Eigen::Vector3d rr = R * r, vv = R * v;
  return {rr[0], rr[1], rr[2], vv[0], vv[1], vv[2]};
}

// Conjugation of the symmetric matrix state by a planar rotation.
State conjugate_matrix_state(const State& x, double psi) {
  Eigen::Matrix2d G;
  G << std::cos(psi), std::sin(psi), -std::sin(psi), std::cos(psi);
  Eigen::Matrix2d X = G * symmetric_matrix(x[0], x[1], x[2]) * G.transpose();
  Eigen::Matrix2d V = G * symmetric_matrix(x[3], x[4], x[5]) * G.transpose();
  return {X(0, 0), kSqrt2 * X(0, 1), X(1, 1), V(0, 0), kSqrt2 * V(0, 1), V(1, 1)};
}

ScalarField radial_distance() {
  return ScalarField::make(6, "|r|", [](auto x) { return sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); });
}
ScalarField radial_velocity() {
  return ScalarField::make(6, "rdot", [](auto x) {
    return (x[0] * x[3] + x[1] * x[4] + x[2] * x[5]) / sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  });
}
reduce::QuotientMap radial_quotient() { return {{radial_distance(), radial_velocity()}, {"r", "rdot"}}; }

State random_state6(Rng& rng) {
  State x(6);
  for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-1.5, 1.5);
  for (int i = 3; i < 6; ++i) x[i] = rng.uniform(-1.0, 1.0);
  return x;
}

nlohmann::json state_json(const State& x) { return nlohmann::json(x); }

}  // namespace

Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return q.toRotationMatrix();
}

VectorFieldSystem free_particle_3d() {
  auto s = flow::second_order_lift(
      3,
      [](auto, auto v, double) {
        using T = std::remove_cvref_t<decltype(v[0])>;
        return Vec<T>(3, T(0.0));
      },
      "free-particle-3d");
  s.coord_names = {"x", "y", "z", "vx", "vy", "vz"};
  return s;
}

VectorFieldSystem radial_fixed_l(double l) {
  auto s = flow::second_order_lift(
      1, [l](auto q, auto, double) { return std::vector{l * l / (q[0] * q[0] * q[0])}; }, "radial-fixed-l");
  s.coord_names = {"r", "rdot"};
  return s;
}

VectorFieldSystem radial_fixed_E(double E) {
  auto s = flow::second_order_lift(
      1, [E](auto q, auto v, double) { return std::vector{2.0 * E / q[0] - v[0] * v[0] / q[0]}; }, "radial-fixed-E");
  s.coord_names = {"r", "rdot"};
  return s;
}

VectorFieldSystem radial_convex(double alpha, double k, double E) {
  if (alpha < 0.0 || alpha > 1.0) throw DomainError("convex weight must lie in [0, 1]");
  auto s = flow::second_order_lift(
      1,
      [alpha, k, E](auto q, auto v, double) {
        const auto& r = q[0];
        return std::vector{(alpha * k * k + (1.0 - alpha) * (2.0 * E - v[0] * v[0]) * r * r) / (r * r * r)};
      },
      "radial-convex");
  s.coord_names = {"r", "rdot"};
  return s;
}

namespace {
VectorFieldSystem radial_td(double k, bool rederived) {
  auto rhs = [k, rederived](double t, std::span<const double> x) -> State {
    if (t == 0.0) throw SingularTime("time-dependent radial force is singular at t = 0");
    const double r = x[0], rd = x[1];
    const double middle = rederived ? r / (t * t) : 1.0 / (r * t * t);
    return {rd, k * k / (r * t * t) + 2.0 * rd / t - middle - rd * rd / r};
  };
  return VectorFieldSystem::non_autonomous(2, rederived ? "radial-time-dependent-rederived" : "radial-time-dependent",
                                           rhs, {"r", "rdot"});
}
}  // namespace

VectorFieldSystem radial_time_dependent(double k) { return radial_td(k, false); }
VectorFieldSystem radial_time_dependent_rederived(double k) { return radial_td(k, true); }

VectorFieldSystem matrix_free_symmetric() {
  auto s = flow::second_order_lift(
      3,
      [](auto, auto v, double) {
        using T = std::remove_cvref_t<decltype(v[0])>;
        return Vec<T>(3, T(0.0));
      },
      "matrix-free-symmetric");
  s.coord_names = {"x1", "x2", "x3", "x1dot", "x2dot", "x3dot"};
  return s;
}

Eigen::Matrix2d symmetric_matrix(double x1, double x2, double x3) {
  Eigen::Matrix2d X;
  X << x1, x2 / kSqrt2, x2 / kSqrt2, x3;
  return X;
}

Eigen::Matrix2d commutator_M(std::span<const double> s) {
  Eigen::Matrix2d X = symmetric_matrix(s[0], s[1], s[2]);
  Eigen::Matrix2d V = symmetric_matrix(s[3], s[4], s[5]);
  return X * V - V * X;
}

double coupling_from_state(std::span<const double> s) {
  Eigen::Matrix2d alpha;
  alpha << 0, 1, -1, 0;
  return 0.5 * (commutator_M(s) * alpha).trace();
}

double reference_l3(std::span<const double> s) { return -(s[1] * s[5] - s[4] * s[2]); }

reduce::QuotientMap eigenvalue_quotient() {
  auto mk = [](int which) {
    return [which](auto x) {
      const auto m = 0.5 * (x[0] + x[2]);
      const auto h = 0.5 * (x[0] - x[2]);
      const auto sq = sqrt(h * h + 0.5 * x[1] * x[1]);
      const auto md = 0.5 * (x[3] + x[5]);
      const auto dd = h * (x[3] - x[5]) + x[1] * x[4];
      const auto sd = dd / (2.0 * sq);
      switch (which) {
        case 0: return m - sq;
        case 1: return m + sq;
        case 2: return md - sd;
        default: return md + sd;
      }
    };
  };
  return {{ScalarField::make(6, "q1", mk(0)), ScalarField::make(6, "q2", mk(1)), ScalarField::make(6, "q1dot", mk(2)),
           ScalarField::make(6, "q2dot", mk(3))},
          {"q1", "q2", "q1dot", "q2dot"}};
}

ScalarField eigenframe_angle() {
  return ScalarField::make(6, "phi", [](auto x) { return 0.5 * atan2(kSqrt2 * x[1], -(x[0] - x[2])); });
}

std::vector<EigenSample> eigen_decompose_tracked(const Trajectory& traj) {
  std::vector<EigenSample> out;
  out.reserve(traj.size());
  double prev2phi = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State& x = traj.states[k];
    const double m = 0.5 * (x[0] + x[2]);
    const double h = 0.5 * (x[0] - x[2]);
    const double s = std::sqrt(h * h + 0.5 * x[1] * x[1]);
    if (2.0 * s < 1e-10) throw DegenerateSpectrum("eigenvalues coincide at t = " + std::to_string(traj.times[k]));
    double lo = m - s, hi = m + s;
    EigenSample e;
    e.t = traj.times[k];
    if (k == 0) {
      e.q1 = lo;
      e.q2 = hi;
    } else {
      const auto& p = out.back();
      const double keep = std::abs(p.q1 - lo) + std::abs(p.q2 - hi);
      const double swap = std::abs(p.q1 - hi) + std::abs(p.q2 - lo);
      e.q1 = keep <= swap ? lo : hi;
      e.q2 = keep <= swap ? hi : lo;
    }
    const double d = e.q2 - e.q1;
    double two_phi = std::atan2(kSqrt2 * x[1] / d, (x[0] - x[2]) / (-d));
    if (k > 0) {
      while (two_phi - prev2phi > std::numbers::pi) two_phi -= 2.0 * std::numbers::pi;
      while (two_phi - prev2phi < -std::numbers::pi) two_phi += 2.0 * std::numbers::pi;
    }
    prev2phi = two_phi;
    e.phi = 0.5 * two_phi;
    out.push_back(e);
  }
  return out;
}

VectorFieldSystem calogero_two_body(double g) {
  auto s = flow::second_order_lift(
      2,
      [g](auto q, auto, double) {
        const auto d = q[1] - q[0];
        const auto f = 2.0 * g * g / (d * d * d);
        return std::vector{-f, f};
      },
      "calogero-two-body");
  s.coord_names = {"q1", "q2", "q1dot", "q2dot"};
  return s;
}

reduce::QuotientMap so3_quotient() {
  return {{ScalarField::make(6, "r.r", [](auto x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }),
           ScalarField::make(6, "v.v", [](auto x) { return x[3] * x[3] + x[4] * x[4] + x[5] * x[5]; }),
           ScalarField::make(6, "r.v", [](auto x) { return x[0] * x[3] + x[1] * x[4] + x[2] * x[5]; })},
          {"xi1", "xi2", "xi3"}};
}

VectorFieldSystem riccati_scalar(double a, double b, double c) {
  return VectorFieldSystem::from_field(
      VectorFieldFn::make(1, "riccati", [a, b, c](auto x) { return std::vector{c + 2.0 * b * x[0] - a * x[0] * x[0]}; }),
      {"xi"});
}

VectorFieldSystem riccati_scalar_zeta(double a, double b, double c) {
  return VectorFieldSystem::from_field(
      VectorFieldFn::make(1, "riccati-zeta", [a, b, c](auto x) { return std::vector{a - 2.0 * b * x[0] - c * x[0] * x[0]}; }),
      {"zeta"});
}

VectorFieldSystem linear_2d(double a, double b, double c) {
  return VectorFieldSystem::from_field(
      VectorFieldFn::make(2, "linear-2d", [a, b, c](auto x) { return std::vector{b * x[0] + c * x[1], a * x[0] - b * x[1]}; }),
      {"x", "y"});
}

ProjectiveTrack project_linear_2d(const Trajectory& traj, double hysteresis) {
  ProjectiveTrack out;
  int chart = -1;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double x = traj.states[k][0], y = traj.states[k][1];
    if (x == 0.0 && y == 0.0) throw OriginExcluded("trajectory reached the origin at t = " + std::to_string(traj.times[k]));
    if (chart < 0) {
      chart = std::abs(y) >= std::abs(x) ? 0 : 1;
    } else if (chart == 0 && std::abs(x) > (1.0 + hysteresis) * std::abs(y)) {
      chart = 1;
      out.switch_times.push_back(traj.times[k]);
    } else if (chart == 1 && std::abs(y) > (1.0 + hysteresis) * std::abs(x)) {
      chart = 0;
      out.switch_times.push_back(traj.times[k]);
    }
    out.samples.push_back({traj.times[k], chart, chart == 0 ? x / y : y / x});
  }
  return out;
}

CatalogEntry radial_l_entry(double l) {
  CatalogEntry e;
  e.name = "radial-l";
  e.notes = "free motion restricted to fixed angular momentum, projected to (r, rdot)";
  auto& sc = e.scenario;
  sc.name = e.name;
  sc.system = free_particle_3d();
  sc.reduced = radial_fixed_l(l);
  sc.quotient = radial_quotient();
  sc.surface = reduce::InvariantSurface{{ScalarField::make(6, "|r x v|^2",
                                                           [](auto x) {
                                                             auto a = x[1] * x[5] - x[2] * x[4];
                                                             auto b = x[2] * x[3] - x[0] * x[5];
                                                             auto c = x[0] * x[4] - x[1] * x[3];
                                                             return a * a + b * b + c * c;
                                                           })},
                                        {l * l},
                                        1e-8};
  sc.sample_point = [l](Rng& rng) {
    for (;;) {
      State x = random_state6(rng);
      Eigen::Vector3d r(x[0], x[1], x[2]), v(x[3], x[4], x[5]);
      if (r.norm() < 0.3) continue;
      Eigen::Vector3d par = r * (r.dot(v) / r.squaredNorm());
      Eigen::Vector3d perp = v - par;
      if (perp.norm() < 1e-3) continue;
      perp *= l / (r.norm() * perp.norm());
      v = par + perp;
      return State{r[0], r[1], r[2], v[0], v[1], v[2]};
    }
  };
  sc.equivalent_point = [](Rng& rng, const State& x) { return rotate_pair(random_rotation(rng), x); };
  e.default_x0 = {1.0, 0.0, 0.0, 0.2, l, 0.0};
  e.t0 = 0.0;
  e.t1 = 5.0;
  e.config = {{"name", e.name}, {"params", {{"l", l}}}, {"t0", e.t0}, {"t1", e.t1}, {"x0", state_json(e.default_x0)}};
  return e;
}

CatalogEntry radial_E_entry(double E) {
  CatalogEntry e;
  e.name = "radial-E";
  e.notes = "free motion restricted to fixed energy, projected to (r, rdot)";
  auto& sc = e.scenario;
  sc.name = e.name;
  sc.system = free_particle_3d();
  sc.reduced = radial_fixed_E(E);
  sc.quotient = radial_quotient();
  sc.surface = reduce::InvariantSurface{
      {ScalarField::make(6, "v.v", [](auto x) { return x[3] * x[3] + x[4] * x[4] + x[5] * x[5]; })}, {2.0 * E}, 1e-8};
  const double speed = std::sqrt(2.0 * E);
  sc.sample_point = [speed](Rng& rng) {
    for (;;) {
      State x = random_state6(rng);
      Eigen::Vector3d r(x[0], x[1], x[2]), v(x[3], x[4], x[5]);
      if (r.norm() < 0.3 || v.norm() < 1e-3) continue;
      v *= speed / v.norm();
      return State{r[0], r[1], r[2], v[0], v[1], v[2]};
    }
  };
  sc.equivalent_point = [](Rng& rng, const State& x) { return rotate_pair(random_rotation(rng), x); };
  Eigen::Vector3d v0(0.3, 0.8, 0.2);
  v0 *= speed / v0.norm();
  e.default_x0 = {1.0, 0.5, 0.0, v0[0], v0[1], v0[2]};
  e.t0 = 0.0;
  e.t1 = 5.0;
  e.config = {{"name", e.name}, {"params", {{"E", E}}}, {"t0", e.t0}, {"t1", e.t1}, {"x0", state_json(e.default_x0)}};
  return e;
}

CatalogEntry calogero_entry(double g) {
  CatalogEntry e;
  e.name = "calogero-from-matrix";
  e.notes = "free symmetric 2x2 matrix motion on a fixed-coupling surface, projected to its eigenvalues";
  auto& sc = e.scenario;
  sc.name = e.name;
  sc.system = matrix_free_symmetric();
  sc.reduced = calogero_two_body(g);
  sc.quotient = eigenvalue_quotient();
  sc.surface = reduce::InvariantSurface{
      {ScalarField::make(6, "Tr(M alpha)/2",
                         [](auto x) {
                           return -((x[0] * x[4] - x[3] * x[1]) + (x[1] * x[5] - x[4] * x[2])) / kSqrt2;
                         })},
      {g},
      1e-8};
  sc.sample_point = [g](Rng& rng) {
    const double q1 = rng.uniform(-1.0, 0.0);
    const double q2 = q1 + rng.uniform(0.5, 1.5);
    const double q1d = rng.uniform(-0.5, 0.5), q2d = rng.uniform(-0.5, 0.5);
    const double phi = rng.uniform(0.0, std::numbers::pi);
    return calogero_on_surface(q1, q2, q1d, q2d, phi, g);
  };
  sc.equivalent_point = [](Rng& rng, const State& x) {
    return conjugate_matrix_state(x, rng.uniform(-std::numbers::pi, std::numbers::pi));
  };
  e.default_x0 = calogero_on_surface(-0.5, 0.7, 0.4, -0.3, 0.3, g);
  e.t0 = 0.0;
  e.t1 = 6.0;
  e.stop = [](const State& q) { return std::abs(q[1] - q[0]) < 0.05; };
  e.config = {{"name", e.name}, {"params", {{"g", g}}}, {"t0", e.t0}, {"t1", e.t1}, {"x0", state_json(e.default_x0)}};
  return e;
}

CatalogEntry so3_entry(double stiffness, double drag) {
  CatalogEntry e;
  e.name = "so3-quotient";
  e.notes = "isotropic oscillator with linear drag projected to the rotation invariants";
  auto force = [stiffness, drag](auto r, auto v) {
    using T = std::remove_cvref_t<decltype(r[0])>;
    Vec<T> f(3);
    for (int i = 0; i < 3; ++i) f[i] = -stiffness * r[i] - drag * v[i];
    return f;
  };
  auto& sc = e.scenario;
  sc.name = e.name;
  sc.system = flow::second_order_lift(3, [force](auto q, auto v, double) { return force(q, v); }, "central-force-3d");
  sc.system.coord_names = {"x", "y", "z", "vx", "vy", "vz"};
  sc.reduced = so3_reduced(force);
  sc.quotient = so3_quotient();
  sc.sample_point = [](Rng& rng) { return random_state6(rng); };
  sc.equivalent_point = [](Rng& rng, const State& x) { return rotate_pair(random_rotation(rng), x); };
  e.default_x0 = {1.0, 0.2, -0.3, 0.1, 0.9, 0.4};
  e.t0 = 0.0;
  e.t1 = 5.0;
  e.config = {{"name", e.name},
              {"params", {{"stiffness", stiffness}, {"drag", drag}}},
              {"t0", e.t0},
              {"t1", e.t1},
              {"x0", state_json(e.default_x0)}};
  return e;
}

CatalogEntry riccati_entry(double a, double b, double c) {
  CatalogEntry e;
  e.name = "riccati-classical";
  e.notes = "linear planar flow projected to the ratio x/y";
  auto& sc = e.scenario;
  sc.name = e.name;
  sc.system = linear_2d(a, b, c);
  sc.reduced = riccati_scalar(a, b, c);
  sc.quotient = reduce::QuotientMap{{ScalarField::make(2, "x/y", [](auto x) { return x[0] / x[1]; })}, {"xi"}};
  sc.sample_point = [](Rng& rng) {
    const double y = rng.uniform(0.3, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    return State{rng.uniform(-1.0, 1.0), y};
  };
  sc.equivalent_point = [](Rng& rng, const State& x) {
    const double lam = rng.uniform(0.5, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    return State{lam * x[0], lam * x[1]};
  };
  e.default_x0 = {0.4, 1.0};
  e.t0 = 0.0;
  e.t1 = 2.0;
  e.config = {{"name", e.name},
              {"params", {{"a", a}, {"b", b}, {"c", c}}},
              {"t0", e.t0},
              {"t1", e.t1},
              {"x0", state_json(e.default_x0)}};
  return e;
}

std::vector<CatalogEntry> entries() {
  std::vector<CatalogEntry> v{calogero_entry(), radial_E_entry(), radial_l_entry(), riccati_entry(), so3_entry()};
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return v;
}

}  // namespace geored::catalog
