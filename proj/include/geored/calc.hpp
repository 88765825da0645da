// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geored/field.hpp"

namespace geored::calc {

enum class Mode { DUAL, CENTRAL };

struct DiffScheme {
  Mode mode = Mode::DUAL;
  double step = 1e-6;  // CENTRAL only; scaled by (1 + |x_i|)

  static DiffScheme dual() { return {}; }
  static DiffScheme central(double h = 1e-6) { return {Mode::CENTRAL, h}; }
};

std::vector<double> gradient(const ScalarField& f, std::span<const double> x, const DiffScheme& s = {});
Eigen::MatrixXd jacobian(std::span<const ScalarField> F, std::span<const double> x, const DiffScheme& s = {});
Eigen::MatrixXd jacobian(const VectorFieldFn& X, std::span<const double> x, const DiffScheme& s = {});
Eigen::MatrixXd hessian(const ScalarField& f, std::span<const double> x, const DiffScheme& s = {});
double lie_derivative(const VectorFieldFn& X, const ScalarField& f, std::span<const double> x,
                      const DiffScheme& s = {});
std::vector<double> field_commutator(const VectorFieldFn& X, const VectorFieldFn& Y, std::span<const double> x,
                                     const DiffScheme& s = {});

// Exact gradient at scalar level T, one forward pass per direction.
template <class T>
std::vector<T> gradient_t(const ScalarField& f, std::span<const T> x) {
  const std::size_t n = x.size();
  std::vector<Dual<T>> xd(n);
  for (std::size_t i = 0; i < n; ++i) xd[i] = Dual<T>(x[i], T(0.0));
  std::vector<T> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    xd[i].d = T(1.0);
    g[i] = f.eval<Dual<T>>(std::span<const Dual<T>>(xd)).d;
    xd[i].d = T(0.0);
  }
  return g;
}

// Exact Hessian at level T using nested duals; symmetric by construction.
template <class T>
Mat<T> hessian_t(const ScalarField& f, std::span<const T> x) {
  using DD = Dual<Dual<T>>;
  const std::size_t n = x.size();
  std::vector<DD> xd(n);
  for (std::size_t k = 0; k < n; ++k) xd[k] = DD(Dual<T>(x[k], T(0.0)), Dual<T>(T(0.0), T(0.0)));
  Mat<T> H(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    xd[i].v.d = T(1.0);
    for (std::size_t j = i; j < n; ++j) {
      xd[j].d.v = T(1.0);
      T h = f.eval<DD>(std::span<const DD>(xd)).d.d;
      H(i, j) = h;
      H(j, i) = h;
      xd[j].d.v = T(0.0);
    }
    xd[i].v.d = T(0.0);
  }
  return H;
}

// Jacobian of a vector field at level T: J(i, j) = d X_i / d x_j.
template <class T>
Mat<T> jacobian_t(const VectorFieldFn& X, std::span<const T> x) {
  const std::size_t n = x.size();
  std::vector<Dual<T>> xd(n);
  for (std::size_t i = 0; i < n; ++i) xd[i] = Dual<T>(x[i], T(0.0));
  Mat<T> J(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    xd[j].d = T(1.0);
    auto col = X.eval<Dual<T>>(std::span<const Dual<T>>(xd));
    for (std::size_t i = 0; i < n; ++i) J(i, j) = col[i].d;
    xd[j].d = T(0.0);
  }
  return J;
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace geored::calc
