// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "geored/field.hpp"
#include "geored/random.hpp"

namespace geored {

// Twenty smooth fields on R^3 for cross-checking derivative schemes. Even
// entries are cubic polynomials, odd entries are rationals with a positive
// denominator; every fifth mixes in a transcendental factor.
inline std::vector<ScalarField> derivative_corpus(std::uint64_t seed = 2026) {
  Rng rng(seed);
  std::vector<ScalarField> out;
  for (int k = 0; k < 20; ++k) {
    std::array<double, 10> c{};
    for (double& v : c) v = rng.uniform(-2.0, 2.0);
    std::array<double, 4> d{};
    for (double& v : d) v = rng.uniform(-1.0, 1.0);
    const bool rational = (k % 2) == 1;
    const bool transcendental = (k % 5) == 4;
    auto f = [c, d, rational, transcendental](auto x) {
      using T = std::remove_cvref_t<decltype(x[0])>;
      const T& a = x[0];
      const T& b = x[1];
      const T& e = x[2];
      T p = c[0] + c[1] * a + c[2] * b + c[3] * e + c[4] * a * b + c[5] * b * e + c[6] * a * e +
            c[7] * a * a * a + c[8] * b * b * e + c[9] * a * b * e;
      if (rational) {
        T q = d[0] * a + d[1] * b * b + d[2] * e + d[3] * a * e;
        p = p / (1.0 + q * q);
      }
      if (transcendental) p = p * sin(a + 0.5 * b) + exp(0.3 * e);
      return p;
    };
    out.push_back(ScalarField::make(3, "corpus" + std::to_string(k), f));
  }
  return out;
}

}  // namespace geored
