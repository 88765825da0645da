// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geored {

// Serial is the reference path; OpenMP must produce identical results.
enum class Exec { Serial, OpenMP };

inline Exec default_exec() {
#ifdef _OPENMP
  return Exec::OpenMP;
#else
  return Exec::Serial;
#endif
}

// Calls fn(i) for i in [0, n). The first exception thrown by any index is
// rethrown after the loop.
template <class Fn>
void for_each_index(Exec ex, std::size_t n, Fn&& fn) {
  if (ex == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < nn; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(geored_for_each_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

// Evaluates fn(i) into a vector, in index order regardless of scheduling.
template <class R, class Fn>
std::vector<R> map_index(Exec ex, std::size_t n, Fn&& fn) {
  std::vector<R> out(n);
  for_each_index(ex, n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

// Max of fn(i) over [0, n); reduction is order independent.
template <class Fn>
double max_over(Exec ex, std::size_t n, Fn&& fn) {
  auto v = map_index<double>(ex, n, fn);
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace geored
