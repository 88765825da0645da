// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geored/calc.hpp"
#include "geored/field.hpp"

namespace geored {

// A point-dependent bivector P with {f, g} = df^T P dg. Evaluable at double
// and at first-order duals so that brackets of brackets can be differentiated.
class PoissonTensor {
 public:
  PoissonTensor() = default;

  template <int MaxLevel = 1, class F>
  static PoissonTensor make(std::size_t dim, std::string label, F f) {
    static_assert(MaxLevel == 0 || MaxLevel == 1);
    PoissonTensor p;
    p.dim_ = dim;
    p.label_ = std::move(label);
    p.f0_ = [f](std::span<const double> z) -> Mat<double> { return f(z); };
    if constexpr (MaxLevel >= 1) p.f1_ = [f](std::span<const D1> z) -> Mat<D1> { return f(z); };
    return p;
  }

  // Canonical structure on R^{2n} with coordinates (q, p): {q_i, p_j} = delta_ij.
  static PoissonTensor canonical(std::size_t n) {
    return make(2 * n, "canonical", [n](auto z) {
      using T = typename decltype(z)::value_type;
      Mat<std::remove_const_t<T>> P(2 * n, 2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        P(i, n + i) = 1.0;
        P(n + i, i) = -1.0;
      }
      return P;
    });
  }

  std::size_t dim() const { return dim_; }
  const std::string& label() const { return label_; }

  template <class T>
  Mat<T> eval(std::span<const T> z) const {
    if (z.size() != dim_) throw EvaluationError("poisson tensor '" + label_ + "': wrong dimension");
    if constexpr (std::is_same_v<T, double>) {
      return f0_(z);
    } else {
      static_assert(std::is_same_v<T, D1>, "unsupported scalar type");
      if (!f1_) throw EvaluationError("poisson tensor '" + label_ + "' is not differentiable");
      return f1_(z);
    }
  }

  Eigen::MatrixXd matrix(std::span<const double> z) const {
    Mat<double> m = eval<double>(z);
    Eigen::MatrixXd r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) r(i, j) = m(i, j);
    return r;
  }

 private:
  std::size_t dim_ = 0;
  std::string label_;
  std::function<Mat<double>(std::span<const double>)> f0_;
  std::function<Mat<D1>(std::span<const D1>)> f1_;
};

template <class T>
T bracket_t(const PoissonTensor& P, const ScalarField& f, const ScalarField& g, std::span<const T> z) {
  const auto df = calc::gradient_t<T>(f, z);
  const auto dg = calc::gradient_t<T>(g, z);
  const Mat<T> m = P.eval<T>(z);
  T s(0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (value_of(df[i]) == 0.0 && !is_dual<T>::value) continue;
    T row(0.0);
    for (std::size_t j = 0; j < m.cols; ++j) row += m(i, j) * dg[j];
    s += df[i] * row;
  }
  return s;
}

inline double bracket(const PoissonTensor& P, const ScalarField& f, const ScalarField& g,
                      std::span<const double> z) {
  double v = bracket_t<double>(P, f, g, z);
  if (!std::isfinite(v)) throw EvaluationError("bracket {" + f.label() + ", " + g.label() + "} not finite");
  return v;
}

// {f, g} as a field, differentiable once.
inline ScalarField bracket_field(const PoissonTensor& P, const ScalarField& f, const ScalarField& g) {
  return ScalarField::make<1>(P.dim(), "{" + f.label() + "," + g.label() + "}",
                              [P, f, g](auto z) {
                                using T = std::remove_const_t<typename decltype(z)::value_type>;
                                return bracket_t<T>(P, f, g, z);
                              });
}

// |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}|
inline double jacobi_residual(const PoissonTensor& P, const ScalarField& f, const ScalarField& g,
                              const ScalarField& h, std::span<const double> z) {
  return std::abs(bracket(P, f, bracket_field(P, g, h), z) + bracket(P, g, bracket_field(P, h, f), z) +
                  bracket(P, h, bracket_field(P, f, g), z));
}

}  // namespace geored
