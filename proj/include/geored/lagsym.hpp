// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "geored/calc.hpp"
#include "geored/field.hpp"
#include "geored/poisson.hpp"
#include "geored/random.hpp"

namespace geored::lagsym {

// Lagrangian on TQ with coordinates (q_1..q_n, v_1..v_n). L must support
// third derivatives for nested brackets.
struct LagrangianModel {
  std::size_t n = 0;
  ScalarField L;
  std::string label;
};

struct MetricSignature {
  std::array<double, 4> diag{1.0, -1.0, -1.0, -1.0};

  void validate() const;
  double operator[](std::size_t i) const { return diag[i]; }

  template <class T>
  T square(std::span<const T> u) const {
    T s(0.0);
    for (std::size_t i = 0; i < 4; ++i) s += diag[i] * u[i] * u[i];
    return s;
  }
};

struct TwoFormAtPoint {
  Eigen::MatrixXd matrix;  // omega = 1/2 W_ab dz^a ^ dz^b
  std::vector<double> point;
};

struct Regularity {
  bool regular = false;
  double det = 0.0;
  int rank = 0;
};

// v.v/2 - U(q) for a potential field on n coordinates.
LagrangianModel natural(std::size_t n, const ScalarField& U, std::string label = "natural");
// m c sqrt(eta(v, v)) on T R^4; non-timelike velocities raise DomainError.
LagrangianModel relativistic_free(double m = 1.0, double c = 1.0, MetricSignature sig = {});

std::vector<double> cartan_one_form(const LagrangianModel& model, std::span<const double> z);
double energy(const LagrangianModel& model, std::span<const double> z);
Regularity is_regular(const LagrangianModel& model, std::span<const double> z, double tol = 1e-8);

// omega = -d theta with W(q_i, v_j) = d2L/dv_i dv_j and
// W(q_i, q_j) = d2L/dv_i dq_j - d2L/dv_j dq_i.
template <class T>
Mat<T> two_form_t(const LagrangianModel& model, std::span<const T> z) {
  const std::size_t n = model.n;
  const Mat<T> h = calc::hessian_t<T>(model.L, z);
  Mat<T> W(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      W(i, n + j) = h(n + i, n + j);
      W(n + j, i) = -h(n + i, n + j);
      W(i, j) = h(n + i, j) - h(n + j, i);
    }
  return W;
}

TwoFormAtPoint lagrangian_two_form(const LagrangianModel& model, std::span<const double> z);

// Unique Gamma with i_Gamma omega = dE; throws DegenerateLagrangian.
std::vector<double> el_field(const LagrangianModel& model, std::span<const double> z);

// Bracket of a regular model, -W^{-1}, so that {q, v} is the inverse Hessian.
PoissonTensor regular_tensor(const LagrangianModel& model);
double pb_regular(const LagrangianModel& model, const ScalarField& f, const ScalarField& g,
                  std::span<const double> z);

std::vector<std::vector<double>> kernel_basis(const TwoFormAtPoint& omega, double tol = 1e-8);
// Distance of v from span(basis), basis assumed orthonormal.
double span_residual(const std::vector<std::vector<double>>& basis, std::span<const double> v);

struct NewtonWigner {
  std::array<double, 3> Q{};
  std::array<double, 3> P{};
};
NewtonWigner newton_wigner(std::span<const double> z, const MetricSignature& sig = {});
// Components as fields on T R^4, for use inside brackets.
ScalarField nw_position(std::size_t j, MetricSignature sig = {});
ScalarField nw_momentum(std::size_t j, MetricSignature sig = {});

// Point-dependent (1,1) tensor A on M. `bivector`, when set, is the explicit
// bracket built from A for the model the connection belongs to.
struct ConnectionField {
  std::size_t dim = 0;
  std::string label;
  std::function<Mat<double>(std::span<const double>)> A;
  std::function<Mat<D1>(std::span<const D1>)> A1;
  std::optional<PoissonTensor> bivector;

  Eigen::MatrixXd matrix(std::span<const double> z) const;
};

struct ConnectionCheck {
  double idempotency = 0.0;    // max |A^2 - A|
  double kernel_residual = 0.0;  // max |omega(k)| over k spanning ker A
  int rank_A = 0;
  int kernel_dim_omega = 0;
};
ConnectionCheck inspect_connection(const LagrangianModel& model, const ConnectionField& A,
                                   std::span<const double> z);
// Throws ConnectionInvalid when A^2 != A or ker A != ker omega.
void validate_connection(const LagrangianModel& model, const ConnectionField& A, std::span<const double> z,
                         double tol = 1e-9);

// A = 1 - alpha (x) Delta - beta (x) Gamma on T R^4 with
// alpha = v_mu dv^mu / v^2 and beta = (1/|v|) d(v.x/|v|).
ConnectionField relativistic_connection(double m = 1.0, double c = 1.0, MetricSignature sig = {});

// Bivector on Im A inverting omega there: -B (B^T W B)^{-1} B^T.
Eigen::MatrixXd generic_bivector(const LagrangianModel& model, const ConnectionField& A,
                                 std::span<const double> z);
double presymplectic_bracket(const LagrangianModel& model, const ConnectionField& A, const ScalarField& f,
                             const ScalarField& g, std::span<const double> z);
// The explicit bracket if A carries one, else the generic assembly (not differentiable).
PoissonTensor presymplectic_tensor(const LagrangianModel& model, const ConnectionField& A);

struct Compatibility {
  double lambda_omega_lambda = 0.0;  // max |Lambda omega Lambda - Lambda|
  double kernel_image_sigma = 0.0;   // smallest singular value of [Im omega | ker Lambda]
  bool ok = false;
};
Compatibility compatibility(const LagrangianModel& model, const Eigen::MatrixXd& Lambda,
                            std::span<const double> z, double tol = 1e-8);

// Brackets of x and v on T R^4 with m and c restored, plus the measured and
// reference prefactors of {x, x}.
nlohmann::json bracket_table(double m, double c, std::span<const double> z, MetricSignature sig = {});

std::vector<double> random_timelike_point(Rng& rng, const MetricSignature& sig = {});

}  // namespace geored::lagsym
