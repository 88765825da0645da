// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "geored/flow.hpp"
#include "geored/lagsym.hpp"
#include "geored/parallel.hpp"
#include "geored/poisson.hpp"
#include "geored/random.hpp"

namespace geored::dirac {

using lagsym::MetricSignature;

// N particles; x_a^mu at 8a + mu, p_a^mu at 8a + 4 + mu. Fields on the space
// carry one extra trailing argument, the evolution parameter tau.
struct PhaseSpace {
  std::size_t particles = 1;
  MetricSignature signature;

  std::size_t dim() const { return 8 * particles; }
  std::size_t arity() const { return 8 * particles + 1; }
  std::size_t tau_index() const { return 8 * particles; }
  std::size_t x(std::size_t a, std::size_t mu) const { return 8 * a + mu; }
  std::size_t p(std::size_t a, std::size_t mu) const { return 8 * a + 4 + mu; }
  // Coordinate functions on the full (z, tau) argument.
  ScalarField x_field(std::size_t a, std::size_t mu) const;
  ScalarField p_field(std::size_t a, std::size_t mu) const;
  std::vector<ScalarField> coordinates() const;
};

enum class Role { MASS_SHELL, GAUGE };

struct Constraint {
  std::string label;
  ScalarField f;  // arity 8N + 1
  bool tau_dependent = false;
  Role role = Role::MASS_SHELL;
};

struct ConstraintSet {
  PhaseSpace space;
  std::vector<Constraint> constraints;

  std::size_t size() const { return constraints.size(); }
  std::vector<double> values(std::span<const double> z) const;
  double violation(std::span<const double> z) const;
};

// Max |df/dtau| by central difference; compared against the declared flag.
double tau_sensitivity(const Constraint& c, std::span<const double> z);

struct InteractionPotential {
  ScalarField V;  // arity 1, third derivatives available

  static InteractionPotential linear(double lambda);
  static InteractionPotential zero() { return linear(0.0); }
  double value(double xi) const;
  double derivative(double xi) const;
};

// g^{mu nu} d_x f d_p g - (f <-> g) summed over particles; tau row is zero.
PoissonTensor canonical_tensor(const PhaseSpace& space);
double canonical_pb(const PhaseSpace& space, const ScalarField& f, const ScalarField& g,
                    std::span<const double> z);

struct PoincareGenerators {
  std::vector<ScalarField> J;  // (01, 02, 03, 12, 13, 23), lower indices
  std::vector<ScalarField> P;  // P_0..P_3, lower indices
  std::vector<std::array<std::size_t, 2>> J_index;
};
PoincareGenerators poincare_generators(const PhaseSpace& space);

// C_ab = {v_a, v_b} at (z, tau) with no surface check.
Eigen::MatrixXd full_constraint_matrix(const ConstraintSet& set, std::span<const double> z);
// Same, but refuses points off the surface (|v_a| > surface_tol).
Eigen::MatrixXd constraint_matrix(const ConstraintSet& set, std::span<const double> z, double surface_tol = 1e-9);

// P - (P dv) C^{-1} (dv^T P), dual-differentiable once.
PoissonTensor dirac_tensor(const ConstraintSet& set);
double dirac_bracket(const ConstraintSet& set, const ScalarField& f, const ScalarField& g,
                     std::span<const double> z);
// Throws SingularConstraintMatrix when cond(C) >= 1e10.
void check_admissible(const ConstraintSet& set, std::span<const double> z);

// Max |{f, v_a}_D| over constraints v_a and phase-space coordinates f.
double casimir_residual(const ConstraintSet& set, std::span<const double> z);
// Max Jacobi residual of the Dirac bracket over all coordinate triples i < j < k.
double dirac_jacobi_max(const ConstraintSet& set, std::span<const double> z, Exec ex = default_exec());
// Max |{G_i, G_j} - {G_i, G_j}_D| over Poincare generator pairs.
double poincare_agreement(const ConstraintSet& set, std::span<const double> z);

struct ConsistencySweep {
  double casimir_max = 0.0;
  double poincare_max = 0.0;
  double jacobi_max = 0.0;  // on the first jacobi_points points only
  std::size_t points = 0;
};
ConsistencySweep consistency_sweep(const ConstraintSet& set, const std::vector<std::vector<double>>& points,
                                   std::size_t jacobi_points, Exec ex = default_exec());

enum class Gauge { DYNAMICAL, KINEMATICAL };

struct TwoParticleModel {
  ConstraintSet set;
  double m1 = 1.0;
  double m2 = 2.0;
  InteractionPotential V;
  Gauge gauge = Gauge::DYNAMICAL;
  ScalarField xi;  // r^2 - (P.r)^2 / P^2
};
TwoParticleModel two_particle_model(double m1 = 1.0, double m2 = 2.0,
                                    InteractionPotential V = InteractionPotential::linear(0.1),
                                    Gauge gauge = Gauge::DYNAMICAL);

// Single particle with K = p^2 - m^2 and chi = x^0 - tau.
ConstraintSet free_particle(double m = 1.0);

// On-shell point at parameter tau: random x, spatial momenta, Newton on the
// energies, then shifts along P (dynamical gauge) or of x^0 (kinematical).
std::vector<double> sample_on_shell(const TwoParticleModel& model, Rng& rng, double tau = 0.0);

// {chi_a, K_b} block (rows chi1, chi2; columns K1, K2).
Eigen::Matrix2d cross_block(const TwoParticleModel& model, std::span<const double> z);
// Reference determinant pattern (p1^2 - p2^2)((P.r)^2/P^4 - 2 V'/P^4) for comparison.
double reference_determinant(const TwoParticleModel& model, std::span<const double> z);
// Reference entries of the 2x2 block, same layout as cross_block.
Eigen::Matrix2d reference_block(const TwoParticleModel& model, std::span<const double> z);

// dz/dtau = -sum {z, v_a} C^{-1}_ab d_tau v_b, with Gauss-Newton projection back
// onto the surface whenever the drift exceeds project_tol.
struct ConstrainedFlowConfig {
  flow::IntegratorConfig integrator = flow::IntegratorConfig::rk45(1e-10);
  double project_tol = 1e-9;
  double drift_limit = 1e-7;
};
flow::VectorFieldSystem constrained_system(const ConstraintSet& set);
std::vector<double> constrained_velocity(const ConstraintSet& set, std::span<const double> z);
void project_to_surface(const ConstraintSet& set, std::vector<double>& state, double tau, double tol = 1e-12);

struct ConstrainedRun {
  flow::Trajectory traj;
  double max_drift = 0.0;
  int projections = 0;
};
// point0 has dimension 8N (tau is the trajectory time). Throws ConstraintDrift.
ConstrainedRun constrained_flow(const ConstraintSet& set, const std::vector<double>& point0, double tau0,
                                double tau1, const ConstrainedFlowConfig& cfg = {});

struct NoncommutativityTable {
  std::vector<Eigen::Matrix4d> table;  // per particle {x^mu, x^nu}_D
  double max_abs = 0.0;
};
NoncommutativityTable position_noncommutativity(const ConstraintSet& set, std::span<const double> z);
nlohmann::json to_json(const NoncommutativityTable& t);

struct WlcReport {
  std::vector<double> residual;  // per particle, max component after the fit
  std::vector<double> delta_tau;
  double max_residual = 0.0;
};
// omega holds omega^{mu nu} (antisymmetric), a holds a^mu.
WlcReport wlc_residual(const ConstraintSet& set, const Eigen::Matrix4d& omega, const Eigen::Vector4d& a,
                       std::span<const double> z);
nlohmann::json to_json(const WlcReport& r);

// Lie-Poisson structure on {x_0..x_3, l01, l02, l03, l12, l13, l23}.
struct DeformedPoincare {
  double K = 1.0;
  MetricSignature signature;
  // c[i][j][k]: {e_i, e_j} = sum_k c[i][j][k] e_k
  std::array<std::array<std::array<double, 10>, 10>, 10> c{};

  static std::array<std::string, 10> names();
  std::array<double, 10> bracket(std::size_t i, std::size_t j) const { return c[i][j]; }
  // Max coefficient of {e_i,{e_j,e_k}} + cyclic over all triples.
  double jacobi_residual() const;
  nlohmann::json to_json() const;
};
DeformedPoincare deformed_poincare(double K, MetricSignature sig = {});

}  // namespace geored::dirac
