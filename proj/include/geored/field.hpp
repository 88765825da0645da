// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "geored/dual.hpp"
#include "geored/error.hpp"

namespace geored {

template <class T>
inline constexpr int dual_level = 0;
template <class T>
inline constexpr int dual_level<Dual<T>> = 1 + dual_level<T>;

// A scalar function on R^n, stored as a closure instantiated at every scalar
// type the differentiation stack needs. Fields derived from brackets of other
// fields only reach a lower maximum level.
class ScalarField {
 public:
  ScalarField() = default;

  template <int MaxLevel = 3, class F>
  static ScalarField make(std::size_t arity, std::string label, F f) {
    static_assert(MaxLevel >= 0 && MaxLevel <= 3);
    ScalarField s;
    s.arity_ = arity;
    s.label_ = std::move(label);
    s.max_level_ = MaxLevel;
    s.f0_ = [f](std::span<const double> x) { return static_cast<double>(f(x)); };
    if constexpr (MaxLevel >= 1) s.f1_ = [f](std::span<const D1> x) -> D1 { return f(x); };
    if constexpr (MaxLevel >= 2) s.f2_ = [f](std::span<const D2> x) -> D2 { return f(x); };
    if constexpr (MaxLevel >= 3) s.f3_ = [f](std::span<const D3> x) -> D3 { return f(x); };
    return s;
  }

  std::size_t arity() const { return arity_; }
  const std::string& label() const { return label_; }
  int max_level() const { return max_level_; }
  bool valid() const { return static_cast<bool>(f0_); }

  double operator()(std::span<const double> x) const { return eval<double>(x); }
  double operator()(const std::vector<double>& x) const { return eval<double>(std::span<const double>(x)); }

  template <class T>
  T eval(std::span<const T> x) const {
    if (x.size() != arity_) {
      throw EvaluationError("field '" + label_ + "' expects arity " + std::to_string(arity_) +
                            ", got " + std::to_string(x.size()));
    }
    const auto& fn = pick<T>();
    if (!fn) {
      throw EvaluationError("field '" + label_ + "' does not support derivative level " +
                            std::to_string(dual_level<T>));
    }
    return fn(x);
  }

 private:
  template <class T>
  const std::function<T(std::span<const T>)>& pick() const {
    if constexpr (std::is_same_v<T, double>) return f0_;
    else if constexpr (std::is_same_v<T, D1>) return f1_;
    else if constexpr (std::is_same_v<T, D2>) return f2_;
    else {
      static_assert(std::is_same_v<T, D3>, "unsupported scalar type");
      return f3_;
    }
  }

  std::size_t arity_ = 0;
  std::string label_;
  int max_level_ = -1;
  std::function<double(std::span<const double>)> f0_;
  std::function<D1(std::span<const D1>)> f1_;
  std::function<D2(std::span<const D2>)> f2_;
  std::function<D3(std::span<const D3>)> f3_;
};

// Autonomous vector field R^n -> R^n, evaluable up to second derivatives.
class VectorFieldFn {
 public:
  VectorFieldFn() = default;

  template <int MaxLevel = 2, class F>
  static VectorFieldFn make(std::size_t arity, std::string label, F f) {
    static_assert(MaxLevel >= 0 && MaxLevel <= 2);
    VectorFieldFn s;
    s.arity_ = arity;
    s.label_ = std::move(label);
    s.f0_ = [f](std::span<const double> x) -> std::vector<double> { return f(x); };
    if constexpr (MaxLevel >= 1) s.f1_ = [f](std::span<const D1> x) -> std::vector<D1> { return f(x); };
    if constexpr (MaxLevel >= 2) s.f2_ = [f](std::span<const D2> x) -> std::vector<D2> { return f(x); };
    return s;
  }

  std::size_t arity() const { return arity_; }
  const std::string& label() const { return label_; }
  bool valid() const { return static_cast<bool>(f0_); }

  std::vector<double> operator()(std::span<const double> x) const { return eval<double>(x); }

  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    if (x.size() != arity_) {
      throw EvaluationError("vector field '" + label_ + "' expects arity " + std::to_string(arity_) +
                            ", got " + std::to_string(x.size()));
    }
    const std::function<std::vector<T>(std::span<const T>)>* fn = nullptr;
    if constexpr (std::is_same_v<T, double>) fn = &f0_;
    else if constexpr (std::is_same_v<T, D1>) fn = &f1_;
    else if constexpr (std::is_same_v<T, D2>) fn = &f2_;
    else static_assert(std::is_same_v<T, double>, "unsupported scalar type");
    if (!*fn) {
      throw EvaluationError("vector field '" + label_ + "' does not support derivative level " +
                            std::to_string(dual_level<T>));
    }
    auto out = (*fn)(x);
    if (out.size() != arity_) {
      throw EvaluationError("vector field '" + label_ + "' returned wrong dimension");
    }
    return out;
  }

 private:
  std::size_t arity_ = 0;
  std::string label_;
  std::function<std::vector<double>(std::span<const double>)> f0_;
  std::function<std::vector<D1>(std::span<const D1>)> f1_;
  std::function<std::vector<D2>(std::span<const D2>)> f2_;
};

// Coordinate function x -> x[i].
inline ScalarField coordinate(std::size_t arity, std::size_t i, std::string label = {}) {
  if (label.empty()) label = "x" + std::to_string(i);
  return ScalarField::make(arity, std::move(label), [i](auto x) { return x[i]; });
}

// Row-major dense matrix over any scalar type; used where Eigen would need
// custom NumTraits for nested duals.
template <class T>
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0.0)) {}

  T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }
};

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
  Mat<T> r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const T& xik = x(i, k);
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <class T>
Mat<T> transpose(const Mat<T>& x) {
  Mat<T> r(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
  return r;
}

// Solves A X = B by Gaussian elimination with partial pivoting on the real
// part. Throws when a pivot is exactly zero.
template <class T>
Mat<T> solve(Mat<T> A, Mat<T> B) {
  const std::size_t n = A.rows;
  if (A.cols != n || B.rows != n) throw EvaluationError("solve: dimension mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(value_of(A(k, k)));
    for (std::size_t i = k + 1; i < n; ++i) {
      double c = std::abs(value_of(A(i, k)));
      if (c > best) { best = c; piv = i; }
    }
    if (best == 0.0) throw EvaluationError("solve: singular matrix", k);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      for (std::size_t j = 0; j < B.cols; ++j) std::swap(B(k, j), B(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      T f = A(i, k) / A(k, k);
      if (value_of(f) == 0.0 && !is_dual<T>::value) continue;
      for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      for (std::size_t j = 0; j < B.cols; ++j) B(i, j) -= f * B(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < B.cols; ++j) {
      T s = B(kk, j);
      for (std::size_t c = kk + 1; c < n; ++c) s -= A(kk, c) * B(c, j);
      B(kk, j) = s / A(kk, kk);
    }
  }
  return B;
}

template <class T>
std::vector<T> solve(const Mat<T>& A, const std::vector<T>& b) {
  Mat<T> B(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) B(i, 0) = b[i];
  Mat<T> X = solve(A, std::move(B));
  return X.a;
}

}  // namespace geored
