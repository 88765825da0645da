// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/calc.hpp"

#include <cmath>

namespace geored::calc {

namespace {

void check_step(const DiffScheme& s) {
  if (!(s.step > 0.0)) throw DomainError("difference step must be positive");
}

double checked(double v, std::size_t i, const std::string& label) {
  if (!std::isfinite(v)) throw EvaluationError("non-finite derivative of '" + label + "'", i);
  return v;
}

double h_of(const DiffScheme& s, double xi) { return s.step * (1.0 + std::abs(xi)); }

std::vector<double> central_vec(const VectorFieldFn& X, std::vector<double>& y, std::size_t j, double h) {
  const double x0 = y[j];
  y[j] = x0 + h;
  auto fp = X(y);
  y[j] = x0 - h;
  auto fm = X(y);
  y[j] = x0;
  for (std::size_t i = 0; i < fp.size(); ++i) fp[i] = (fp[i] - fm[i]) / (2.0 * h);
  return fp;
}

}  // namespace

std::vector<double> gradient(const ScalarField& f, std::span<const double> x, const DiffScheme& s) {
  std::vector<double> g;
  if (s.mode == Mode::DUAL) {
    g = gradient_t<double>(f, x);
  } else {
    check_step(s);
    std::vector<double> y(x.begin(), x.end());
    g.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double h = h_of(s, y[i]);
      const double x0 = y[i];
      y[i] = x0 + h;
      const double fp = f(y);
      y[i] = x0 - h;
      const double fm = f(y);
      y[i] = x0;
      g[i] = (fp - fm) / (2.0 * h);
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i) checked(g[i], i, f.label());
  return g;
}

Eigen::MatrixXd jacobian(std::span<const ScalarField> F, std::span<const double> x, const DiffScheme& s) {
  Eigen::MatrixXd J(F.size(), x.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i].arity() != x.size()) throw EvaluationError("jacobian: arity mismatch", i);
    auto g = gradient(F[i], x, s);
    for (std::size_t j = 0; j < g.size(); ++j) J(i, j) = g[j];
  }
  return J;
}

Eigen::MatrixXd jacobian(const VectorFieldFn& X, std::span<const double> x, const DiffScheme& s) {
  const std::size_t n = x.size();
  Eigen::MatrixXd J(n, n);
  if (s.mode == Mode::DUAL) {
    auto Jt = jacobian_t<double>(X, x);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) J(i, j) = Jt(i, j);
  } else {
    check_step(s);
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t j = 0; j < n; ++j) {
      auto col = central_vec(X, y, j, h_of(s, y[j]));
      for (std::size_t i = 0; i < n; ++i) J(i, j) = col[i];
    }
  }
  for (Eigen::Index i = 0; i < J.size(); ++i) checked(J.data()[i], static_cast<std::size_t>(i), X.label());
  return J;
}

Eigen::MatrixXd hessian(const ScalarField& f, std::span<const double> x, const DiffScheme& s) {
  const std::size_t n = x.size();
  Eigen::MatrixXd H(n, n);
  if (s.mode == Mode::DUAL) {
    auto Ht = hessian_t<double>(f, x);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) H(i, j) = Ht(i, j);
  } else {
    check_step(s);
    // second differences need a larger step than first differences
    const double base = std::pow(s.step, 2.0 / 3.0);
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double hi = base * (1.0 + std::abs(x[i]));
        const double hj = base * (1.0 + std::abs(x[j]));
        auto at = [&](double si, double sj) {
          y[i] += si * hi;
          y[j] += sj * hj;
          const double v = f(y);
          y[i] = x[i];
          y[j] = x[j];
          return v;
        };
        const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
        H(i, j) = v;
        H(j, i) = v;
      }
    }
  }
  for (Eigen::Index i = 0; i < H.size(); ++i) checked(H.data()[i], static_cast<std::size_t>(i), f.label());
  Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
  return Hs;
}

double lie_derivative(const VectorFieldFn& X, const ScalarField& f, std::span<const double> x,
                      const DiffScheme& s) {
  if (X.arity() != f.arity()) throw EvaluationError("lie_derivative: arity mismatch");
  auto g = gradient(f, x, s);
  auto v = X(x);
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) r += g[i] * v[i];
  return r;
}

std::vector<double> field_commutator(const VectorFieldFn& X, const VectorFieldFn& Y, std::span<const double> x,
                                     const DiffScheme& s) {
  if (X.arity() != Y.arity()) throw EvaluationError("field_commutator: arity mismatch");
  Eigen::MatrixXd JX = jacobian(X, x, s);
  Eigen::MatrixXd JY = jacobian(Y, x, s);
  auto xv = X(x);
  auto yv = Y(x);
  Eigen::Map<const Eigen::VectorXd> ex(xv.data(), xv.size());
  Eigen::Map<const Eigen::VectorXd> ey(yv.data(), yv.size());
  Eigen::VectorXd c = JY * ex - JX * ey;
  return {c.data(), c.data() + c.size()};
}

}  // namespace geored::calc
