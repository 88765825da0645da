// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "geored/flow.hpp"
#include "geored/reduce.hpp"

namespace geored::catalog {

using flow::State;
using flow::Trajectory;
using flow::VectorFieldSystem;

// Free motion in R^3, state (r, v).
VectorFieldSystem free_particle_3d();

// Radial dynamics on (r, rdot).
VectorFieldSystem radial_fixed_l(double l);
VectorFieldSystem radial_fixed_E(double E);
VectorFieldSystem radial_convex(double alpha, double k, double E);
// Time-dependent radial force as reference: k^2/(r t^2) + 2 rdot/t - 1/(r t^2) - rdot^2/r.
VectorFieldSystem radial_time_dependent(double k);
// Same surface, force obtained by substituting the surface into r rddot = r^2 |n'|^2:
// k^2/(r t^2) + 2 rdot/t - r/t^2 - rdot^2/r.
VectorFieldSystem radial_time_dependent_rederived(double k);

// Free motion of a symmetric 2x2 matrix in the (x1, x2, x3) chart; state (x, xdot).
VectorFieldSystem matrix_free_symmetric();
Eigen::Matrix2d symmetric_matrix(double x1, double x2, double x3);
// M = [X, Xdot]
Eigen::Matrix2d commutator_M(std::span<const double> state);
// g = Tr(M alpha) / 2 with alpha = [[0, 1], [-1, 0]]
double coupling_from_state(std::span<const double> state);
// Coefficient of alpha in M as reference: -(x2 x3dot - x2dot x3).
double reference_l3(std::span<const double> state);

struct EigenSample {
  double t = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double phi = 0.0;
};
std::vector<EigenSample> eigen_decompose_tracked(const Trajectory& traj);

// Eigenvalue map of the matrix state: (q1, q2, q1dot, q2dot) with q1 < q2.
reduce::QuotientMap eigenvalue_quotient();
// Rotation angle of the eigenframe as a scalar field (defined modulo pi).
ScalarField eigenframe_angle();

VectorFieldSystem calogero_two_body(double g);

// Representative point in R^6 with the given rotation invariants.
template <class T>
void so3_lift(std::span<const T> xi, T* r, T* v) {
  const T s = sqrt(xi[0]);
  r[0] = s;
  r[1] = T(0.0);
  r[2] = T(0.0);
  v[0] = xi[2] / s;
  v[1] = sqrt(xi[1] - xi[2] * xi[2] / xi[0]);
  v[2] = T(0.0);
}

// Reduced field on (r.r, v.v, r.v) for a rotation-covariant force f(r, v).
template <class F>
VectorFieldSystem so3_reduced(F force, std::string label = "so3-reduced") {
  auto fld = VectorFieldFn::make<2>(3, label, [force](auto xi) {
    using T = std::remove_cvref_t<decltype(xi[0])>;
    T r[3], v[3];
    so3_lift<T>(xi, r, v);
    auto f = force(std::span<const T>(r, 3), std::span<const T>(v, 3));
    const T vf = v[0] * f[0] + v[1] * f[1] + v[2] * f[2];
    const T rf = r[0] * f[0] + r[1] * f[1] + r[2] * f[2];
    return std::vector<T>{2.0 * xi[2], 2.0 * vf, xi[1] + rf};
  });
  return VectorFieldSystem::from_field(fld, {"xi1", "xi2", "xi3"});
}

// The rotation invariants r.r, v.v, r.v on R^6.
reduce::QuotientMap so3_quotient();

VectorFieldSystem riccati_scalar(double a, double b, double c);
// Ratio y/x of the same linear system: zeta' = a - 2 b zeta - c zeta^2.
VectorFieldSystem riccati_scalar_zeta(double a, double b, double c);
VectorFieldSystem linear_2d(double a, double b, double c);

struct ChartSample {
  double t = 0.0;
  int chart = 0;  // 0: x/y, 1: y/x
  double value = 0.0;
};
struct ProjectiveTrack {
  std::vector<ChartSample> samples;
  std::vector<double> switch_times;
};
// Projects a planar trajectory to the projective line, switching charts with
// a relative hysteresis band.
ProjectiveTrack project_linear_2d(const Trajectory& traj, double hysteresis = 0.05);

struct CatalogEntry {
  std::string name;
  reduce::ReductionScenario scenario;
  State default_x0;
  double t0 = 0.0;
  double t1 = 1.0;
  std::string notes;
  nlohmann::json config;
  // Ends the comparison window (evaluated on the quotient image).
  std::function<bool(const State&)> stop;
};

CatalogEntry radial_l_entry(double l = 1.0);
CatalogEntry radial_E_entry(double E = 0.5);
CatalogEntry calogero_entry(double g = 0.35);
CatalogEntry so3_entry(double stiffness = 1.0, double drag = 0.05);
CatalogEntry riccati_entry(double a = 0.5, double b = 0.3, double c = 0.2);

// The five reduction scenarios, ordered by name.
std::vector<CatalogEntry> entries();

// Random rotation matrix.
Eigen::Matrix3d random_rotation(Rng& rng);

}  // namespace geored::catalog
