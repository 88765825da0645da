// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <type_traits>

namespace geored {

// Forward-mode dual number with a single tangent direction. Nesting
// (Dual<Dual<double>>) gives exact second directional derivatives.
template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T tangent) : v(value), d(tangent) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

inline constexpr double value_of(double x) { return x; }
template <class T>
constexpr double value_of(const Dual<T>& x) { return value_of(x.v); }

template <class T> constexpr Dual<T> operator+(const Dual<T>& a) { return a; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }

template <class T> constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> constexpr Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <class T> constexpr Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }

template <class T> constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> constexpr Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <class T> constexpr Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }

template <class T> constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> constexpr Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T> constexpr Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }

template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
template <class T> constexpr Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T>
constexpr Dual<T> operator/(double a, const Dual<T>& b) {
  T q = a / b.v;
  return {q, -q * b.d / b.v};
}

// Mixed operations with the inner level, e.g. Dual<D1> * D1.
template <class T> requires is_dual<T>::value
constexpr Dual<T> operator+(const Dual<T>& a, const T& b) { return {a.v + b, a.d}; }
template <class T> requires is_dual<T>::value
constexpr Dual<T> operator+(const T& a, const Dual<T>& b) { return {a + b.v, b.d}; }
template <class T> requires is_dual<T>::value
constexpr Dual<T> operator-(const Dual<T>& a, const T& b) { return {a.v - b, a.d}; }
template <class T> requires is_dual<T>::value
constexpr Dual<T> operator-(const T& a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <class T> requires is_dual<T>::value
constexpr Dual<T> operator*(const Dual<T>& a, const T& b) { return {a.v * b, a.d * b}; }
template <class T> requires is_dual<T>::value
constexpr Dual<T> operator*(const T& a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <class T> requires is_dual<T>::value
constexpr Dual<T> operator/(const Dual<T>& a, const T& b) { return {a.v / b, a.d / b}; }

// Comparisons look only at the real part.
template <class T> constexpr bool operator<(const Dual<T>& a, const Dual<T>& b) { return value_of(a) < value_of(b); }
template <class T> constexpr bool operator<(const Dual<T>& a, double b) { return value_of(a) < b; }
template <class T> constexpr bool operator<(double a, const Dual<T>& b) { return a < value_of(b); }
template <class T> constexpr bool operator>(const Dual<T>& a, const Dual<T>& b) { return value_of(a) > value_of(b); }
template <class T> constexpr bool operator>(const Dual<T>& a, double b) { return value_of(a) > b; }
template <class T> constexpr bool operator>(double a, const Dual<T>& b) { return a > value_of(b); }
template <class T> constexpr bool operator<=(const Dual<T>& a, double b) { return value_of(a) <= b; }
template <class T> constexpr bool operator>=(const Dual<T>& a, double b) { return value_of(a) >= b; }

using std::abs;
using std::atan;
using std::atan2;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;
using std::tanh;

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sin(const Dual<T>& a) { return {sin(a.v), cos(a.v) * a.d}; }
template <class T> Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -sin(a.v) * a.d}; }
template <class T>
Dual<T> tan(const Dual<T>& a) {
  T t = tan(a.v);
  return {t, (1.0 + t * t) * a.d};
}
template <class T> Dual<T> sinh(const Dual<T>& a) { return {sinh(a.v), cosh(a.v) * a.d}; }
template <class T> Dual<T> cosh(const Dual<T>& a) { return {cosh(a.v), sinh(a.v) * a.d}; }
template <class T>
Dual<T> tanh(const Dual<T>& a) {
  T t = tanh(a.v);
  return {t, (1.0 - t * t) * a.d};
}
template <class T> Dual<T> atan(const Dual<T>& a) { return {atan(a.v), a.d / (1.0 + a.v * a.v)}; }
template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}
template <class T>
Dual<T> pow(const Dual<T>& a, double p) {
  T vp = pow(a.v, p - 1.0);
  return {vp * a.v, p * vp * a.d};
}
template <class T>
Dual<T> abs(const Dual<T>& a) {
  return value_of(a) < 0.0 ? -a : a;
}

template <class T>
bool isfinite_all(const Dual<T>& a) {
  if constexpr (is_dual<T>::value) {
    return isfinite_all(a.v) && isfinite_all(a.d);
  } else {
    return std::isfinite(a.v) && std::isfinite(a.d);
  }
}
inline bool isfinite_all(double a) { return std::isfinite(a); }

// Integer power by repeated multiplication; keeps nested duals exact.
template <class T>
T ipow(const T& a, int n) {
  T r = T(1.0);
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

}  // namespace geored
