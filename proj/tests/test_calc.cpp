// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geored/calc.hpp"
#include "geored/random.hpp"
#include "geored/corpus.hpp"

using namespace geored;
using namespace geored::calc;

namespace {

std::vector<double> vec(std::initializer_list<double> l) { return l; }

VectorFieldFn free_flow_3d() {
  return VectorFieldFn::make(6, "free", [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    return std::vector<T>{x[3], x[4], x[5], T(0.0), T(0.0), T(0.0)};
  });
}

// Second-order field on (x, xdot) in R^4 x R^4 and its Euler field.
VectorFieldFn gamma_field() {
  return VectorFieldFn::make(8, "Gamma", [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    std::vector<T> out(8, T(0.0));
    for (int i = 0; i < 4; ++i) out[i] = x[4 + i];
    return out;
  });
}
VectorFieldFn delta_field() {
  return VectorFieldFn::make(8, "Delta", [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    std::vector<T> out(8, T(0.0));
    for (int i = 0; i < 4; ++i) out[4 + i] = x[4 + i];
    return out;
  });
}

}  // namespace

TEST_CASE("gradient of trivial fields") {
  auto c = ScalarField::make(3, "seven", [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    return T(7.0);
  });
  auto x = vec({0.3, -1.0, 2.0});
  for (double g : gradient(c, x)) CHECK(g == 0.0);
  auto sq = ScalarField::make(3, "x.x", [](auto x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; });
  auto g = gradient(sq, vec({1, 2, 3}));
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 4.0);
  CHECK(g[2] == 6.0);
}

TEST_CASE("dual gradient agrees with central differences on the corpus") {
  auto corpus = derivative_corpus();
  Rng rng(7);
  for (const auto& f : corpus) {
    for (int p = 0; p < 10; ++p) {
      auto x = rng.uniform_vec(3, -1.5, 1.5);
      auto gd = gradient(f, x);
      auto gc = gradient(f, x, DiffScheme::central());
      double gn = 0.0;
      for (double v : gd) gn = std::max(gn, std::abs(v));
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(gd[i] - gc[i]) < 1e-6 * (1.0 + gn));
    }
  }
}

TEST_CASE("jacobian") {
  std::vector<ScalarField> id{coordinate(2, 0), coordinate(2, 1)};
  auto J = jacobian(id, vec({0.7, -3.0}));
  CHECK(J.isApprox(Eigen::Matrix2d::Identity()));
  std::vector<ScalarField> sq{ScalarField::make(2, "x2", [](auto x) { return x[0] * x[0]; }),
                              ScalarField::make(2, "y2", [](auto x) { return x[1] * x[1]; })};
  auto J2 = jacobian(sq, vec({1, 2}));
  CHECK(J2(0, 0) == 2.0);
  CHECK(J2(1, 1) == 4.0);
  CHECK(J2(0, 1) == 0.0);
  CHECK(J2(1, 0) == 0.0);

  auto corpus = derivative_corpus(99);
  std::vector<ScalarField> poly;
  for (std::size_t k = 0; k < corpus.size(); k += 2) poly.push_back(corpus[k]);
  auto x = vec({0.2, -0.4, 0.9});
  auto Jd = jacobian(poly, x);
  auto Jc = jacobian(poly, x, DiffScheme::central());
  CHECK((Jd - Jc).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("hessian") {
  auto half = ScalarField::make(3, "half v.v", [](auto v) { return 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); });
  auto H = hessian(half, vec({1, -2, 0.5}));
  CHECK(H.isApprox(Eigen::Matrix3d::Identity()));
  auto prod = ScalarField::make(2, "x1 x2", [](auto x) { return x[0] * x[1]; });
  auto H2 = hessian(prod, vec({3, 4}));
  CHECK(H2(0, 0) == 0.0);
  CHECK(H2(1, 1) == 0.0);
  CHECK(H2(0, 1) == 1.0);
  CHECK(H2(1, 0) == 1.0);

  // relativistic free Lagrangian on the velocity block: degenerate along the velocity
  auto L = ScalarField::make(4, "sqrt(eta v v)", [](auto v) {
    return sqrt(v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3]);
  });
  auto Hv = hessian(L, vec({2.0, 0.3, -0.5, 0.7}));
  CHECK(std::abs(Hv.determinant()) < 1e-8);

  auto corpus = derivative_corpus(5);
  Rng rng(11);
  for (const auto& f : corpus) {
    auto x = rng.uniform_vec(3, -1.0, 1.0);
    auto Hd = hessian(f, x);
    CHECK((Hd - Hd.transpose()).cwiseAbs().maxCoeff() == 0.0);
    auto grad = VectorFieldFn::make<1>(3, "grad", [f](auto y) { return gradient_t(f, y); });
    auto Jg = jacobian(grad, x);
    CHECK((Hd - Jg).cwiseAbs().maxCoeff() < 1e-8);
    auto Hc = hessian(f, x, DiffScheme::central());
    CHECK((Hd - Hc).cwiseAbs().maxCoeff() < 1e-4 * (1.0 + Hd.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("lie derivative") {
  auto ang = ScalarField::make(6, "|r x v|^2", [](auto x) {
    auto a = x[1] * x[5] - x[2] * x[4];
    auto b = x[2] * x[3] - x[0] * x[5];
    auto c = x[0] * x[4] - x[1] * x[3];
    return a * a + b * b + c * c;
  });
  auto x = vec({1.0, 0.3, -0.2, 0.5, 0.9, -1.1});
  CHECK(std::abs(lie_derivative(free_flow_3d(), ang, x)) < 1e-12);

  auto euler = VectorFieldFn::make(2, "Euler", [](auto x) { return std::vector{x[0], x[1]}; });
  auto ratio = ScalarField::make(2, "x/y", [](auto x) { return x[0] / x[1]; });
  CHECK(std::abs(lie_derivative(euler, ratio, vec({2, 1}))) < 1e-15);

  const double a = 1, b = 1, c = 1;
  auto lin = VectorFieldFn::make(2, "linear", [=](auto x) {
    return std::vector{b * x[0] + c * x[1], a * x[0] - b * x[1]};
  });
  // ratio dynamics evaluated directly: c + 2 b xi - a xi^2 at xi = 1
  const double expected = c + 2.0 * b * 1.0 - a * 1.0;
  CHECK(lie_derivative(lin, ratio, vec({1, 1})) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("field commutator") {
  Rng rng(3);
  auto G = gamma_field();
  auto D = delta_field();
  auto x = rng.uniform_vec(8, -1, 1);
  for (double v : field_commutator(G, G, x)) CHECK(v == 0.0);
  auto c = field_commutator(D, G, x);
  auto g = G(x);
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(c[i] - g[i]) < 1e-14);

  auto e0 = VectorFieldFn::make(3, "d0", [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    return std::vector<T>{T(1.0), T(0.0), T(0.0)};
  });
  auto e2 = VectorFieldFn::make(3, "d2", [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    return std::vector<T>{T(0.0), T(0.0), T(1.0)};
  });
  for (double v : field_commutator(e0, e2, vec({1, 2, 3}))) CHECK(v == 0.0);

  auto X = VectorFieldFn::make(3, "X", [](auto x) { return std::vector{x[1] * x[2], sin(x[0]), x[0] * x[0] - x[1]}; });
  auto Y = VectorFieldFn::make(3, "Y", [](auto x) { return std::vector{exp(x[2]), x[0] * x[1], cos(x[1]) * x[0]}; });
  for (int p = 0; p < 10; ++p) {
    auto y = rng.uniform_vec(3, -1, 1);
    auto xy = field_commutator(X, Y, y);
    auto yx = field_commutator(Y, X, y);
    for (std::size_t i = 0; i < 3; ++i) CHECK(xy[i] + yx[i] == 0.0);
  }
}

TEST_CASE("errors") {
  auto s = ScalarField::make(2, "sqrt", [](auto x) { return sqrt(x[0]) + x[1]; });
  try {
    gradient(s, vec({0.0, 1.0}));
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.index() == 0);
  }
  CHECK_THROWS_AS(gradient(s, vec({1.0})), EvaluationError);
  CHECK_THROWS_AS(gradient(s, vec({1.0, 1.0}), DiffScheme::central(0.0)), DomainError);
  auto low = ScalarField::make<1>(1, "low", [](auto x) { return x[0] * x[0]; });
  CHECK_THROWS_AS(hessian(low, vec({1.0})), EvaluationError);
}
