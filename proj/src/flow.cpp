// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace geored::flow {

VectorFieldSystem VectorFieldSystem::from_field(VectorFieldFn f, std::vector<std::string> names) {
  VectorFieldSystem s;
  s.dim = f.arity();
  s.label = f.label();
  s.field = f;
  s.rhs = [f](double, std::span<const double> x) { return f(x); };
  if (names.empty())
    for (std::size_t i = 0; i < s.dim; ++i) names.push_back("x" + std::to_string(i));
  s.coord_names = std::move(names);
  s.autonomous = true;
  return s;
}

VectorFieldSystem VectorFieldSystem::non_autonomous(std::size_t dim, std::string label, RhsFn rhs,
                                                    std::vector<std::string> names) {
  VectorFieldSystem s;
  s.dim = dim;
  s.label = std::move(label);
  s.rhs = std::move(rhs);
  if (names.empty())
    for (std::size_t i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
  s.coord_names = std::move(names);
  s.autonomous = false;
  return s;
}

VectorFieldSystem reversed(const VectorFieldSystem& sys) {
  VectorFieldSystem r = sys;
  auto f = sys.rhs;
  r.rhs = [f](double t, std::span<const double> x) {
    State d = f(-t, x);
    for (double& v : d) v = -v;
    return d;
  };
  r.field = VectorFieldFn();
  r.autonomous = sys.autonomous;
  r.label = sys.label + " (reversed)";
  return r;
}

void IntegratorConfig::validate() const {
  if (method == Method::RK4 && !(dt > 0.0)) throw DomainError("dt must be positive");
  if (method == Method::RK45 && !(abs_tol > 0.0 && rel_tol > 0.0))
    throw DomainError("tolerances must be positive");
  if (max_steps <= 0) throw DomainError("max_steps must be positive");
}

namespace {

// Dormand-Prince 5(4) tableau with its continuous extension.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

State eval(const VectorFieldSystem& sys, double t, const State& x) {
  State d = sys.rhs(t, x);
  if (d.size() != x.size()) throw EvaluationError("rhs of '" + sys.label + "' returned wrong dimension");
  return d;
}

bool bad_state(const State& x, double limit) {
  for (double v : x)
    if (!std::isfinite(v) || std::abs(v) > limit) return true;
  return false;
}

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State r = y;
  for (auto [c, k] : terms) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * c * (*k)[i];
  }
  return r;
}

void push(Trajectory& tr, double t, State x, State d) {
  tr.times.push_back(t);
  tr.states.push_back(std::move(x));
  tr.derivs.push_back(std::move(d));
}

Trajectory integrate_rk4(const VectorFieldSystem& sys, const State& x0, double t0, double t1,
                         const IntegratorConfig& cfg) {
  Trajectory tr;
  tr.method = Method::RK4;
  tr.dt = cfg.dt;
  const long long nsteps = std::max<long long>(1, static_cast<long long>(std::ceil((t1 - t0) / cfg.dt - 1e-9)));
  if (nsteps > cfg.max_steps) throw StepLimitExceeded("RK4 would need " + std::to_string(nsteps) + " steps");
  const double h = (t1 - t0) / static_cast<double>(nsteps);
  State x = x0;
  State k1 = eval(sys, t0, x);
  push(tr, t0, x, k1);
  for (long long s = 0; s < nsteps; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    State k2 = eval(sys, t + 0.5 * h, axpy(x, h, {{0.5, &k1}}));
    State k3 = eval(sys, t + 0.5 * h, axpy(x, h, {{0.5, &k2}}));
    State k4 = eval(sys, t + h, axpy(x, h, {{1.0, &k3}}));
    State xn = axpy(x, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
    const double tn = (s + 1 == nsteps) ? t1 : t0 + static_cast<double>(s + 1) * h;
    if (cfg.projector) cfg.projector(tn, xn);
    if (bad_state(xn, cfg.blowup)) throw BlowUp("state of '" + sys.label + "' diverged", t);
    x = std::move(xn);
    k1 = eval(sys, tn, x);
    push(tr, tn, x, k1);
  }
  return tr;
}

double err_norm(const State& y0, const State& y1, const State& e, const IntegratorConfig& cfg) {
  double s = 0.0;
  for (std::size_t i = 0; i < y0.size(); ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = e[i] / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(std::max<std::size_t>(1, y0.size())));
}

double initial_step(const VectorFieldSystem& sys, double t0, const State& x0, const State& f0,
                    const IntegratorConfig& cfg, double span) {
  double dn = 0.0, fn = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(x0[i]);
    dn += (x0[i] / sc) * (x0[i] / sc);
    fn += (f0[i] / sc) * (f0[i] / sc);
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, x0.size()));
  dn = std::sqrt(dn / n);
  fn = std::sqrt(fn / n);
  double h = (dn < 1e-5 || fn < 1e-5) ? 1e-6 : 0.01 * dn / fn;
  h = std::min(h, span);
  State x1 = axpy(x0, h, {{1.0, &f0}});
  State f1 = eval(sys, t0 + h, x1);
  double ddn = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(x0[i]);
    ddn += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
  }
  ddn = std::sqrt(ddn / n) / h;
  const double m = std::max(fn, ddn);
  const double h1 = m <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / m, 1.0 / 5.0);
  return std::min({100.0 * h, h1, span});
}

Trajectory integrate_rk45(const VectorFieldSystem& sys, const State& x0, double t0, double t1,
                          const IntegratorConfig& cfg) {
  Trajectory tr;
  tr.method = Method::RK45;
  tr.abs_tol = cfg.abs_tol;
  tr.rel_tol = cfg.rel_tol;
  const double span = t1 - t0;
  State x = x0;
  State k1 = eval(sys, t0, x);
  push(tr, t0, x, k1);
  double t = t0;
  double h = initial_step(sys, t0, x, k1, cfg, span);
  long long steps = 0;
  const bool keep_dense = !cfg.projector;
  while (t < t1) {
    if (++steps > cfg.max_steps) throw StepLimitExceeded("RK45 exceeded max_steps at t = " + std::to_string(t));
    bool last = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw StepLimitExceeded("RK45 step size underflow");
    State k2 = eval(sys, t + c2 * h, axpy(x, h, {{a21, &k1}}));
    State k3 = eval(sys, t + c3 * h, axpy(x, h, {{a31, &k1}, {a32, &k2}}));
    State k4 = eval(sys, t + c4 * h, axpy(x, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    State k5 = eval(sys, t + c5 * h, axpy(x, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    State k6 = eval(sys, t + h, axpy(x, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    State xn = axpy(x, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    bool finite = !bad_state(xn, std::numeric_limits<double>::infinity());
    State k7;
    double en = std::numeric_limits<double>::infinity();
    if (finite) {
      k7 = eval(sys, t + h, xn);
      State e(x.size(), 0.0);
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      en = err_norm(x, xn, e, cfg);
      if (!std::isfinite(en)) finite = false;
    }
    if (!finite || en > 1.0) {
      ++tr.rejected;
      const double fac = finite ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h *= fac;
      continue;
    }
    const double tn = last ? t1 : t + h;
    if (keep_dense) {
      std::array<State, 5> rc;
      rc[0] = x;
      rc[1].resize(x.size());
      rc[2].resize(x.size());
      rc[3].resize(x.size());
      rc[4].resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double yd = xn[i] - x[i];
        const double bspl = h * k1[i] - yd;
        rc[1][i] = yd;
        rc[2][i] = bspl;
        rc[3][i] = yd - h * k7[i] - bspl;
        rc[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      tr.dense.push_back(std::move(rc));
    }
    if (cfg.projector) {
      cfg.projector(tn, xn);
      k7 = eval(sys, tn, xn);
    }
    if (bad_state(xn, cfg.blowup)) throw BlowUp("state of '" + sys.label + "' diverged", t);
    x = std::move(xn);
    k1 = std::move(k7);
    t = tn;
    push(tr, t, x, k1);
    const double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 10.0);
    h *= fac;
  }
  return tr;
}

}  // namespace

Trajectory integrate(const VectorFieldSystem& sys, const State& x0, double t0, double t1,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t1 > t0)) throw DomainError("integrate requires t1 > t0");
  if (x0.size() != sys.dim) throw DomainError("initial state has wrong dimension");
  if (bad_state(x0, cfg.blowup)) throw BlowUp("initial state not finite", t0);
  return cfg.method == Method::RK4 ? integrate_rk4(sys, x0, t0, t1, cfg) : integrate_rk45(sys, x0, t0, t1, cfg);
}

State Trajectory::at(double t) const {
  if (times.empty()) throw DomainError("empty trajectory");
  const double tol = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (t < times.front() - tol || t > times.back() + tol) throw DomainError("time outside trajectory span");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  const double ta = times[k], tb = times[k + 1], h = tb - ta;
  const double s = (t - ta) / h;
  State r(states[k].size());
  if (!dense.empty() && dense.size() + 1 == times.size()) {
    const auto& rc = dense[k];
    const double s1 = 1.0 - s;
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = rc[0][i] + s * (rc[1][i] + s1 * (rc[2][i] + s * (rc[3][i] + s1 * rc[4][i])));
    return r;
  }
  // cubic Hermite on nodal values and slopes
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = h00 * states[k][i] + h10 * h * derivs[k][i] + h01 * states[k + 1][i] + h11 * h * derivs[k + 1][i];
  return r;
}

std::vector<double> Trajectory::uniform_grid(std::size_t n) const {
  std::vector<double> g(n);
  const double a = t0(), b = t1();
  for (std::size_t i = 0; i < n; ++i)
    g[i] = (n == 1) ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) g.back() = b;
  return g;
}

double conserved_drift(const VectorFieldSystem& sys, const ScalarField& f, const Trajectory& traj) {
  if (f.arity() != sys.dim) throw DomainError("conserved_drift: arity mismatch");
  const double f0 = f(traj.states.front());
  double m = 0.0;
  for (const auto& x : traj.states) m = std::max(m, std::abs(f(x) - f0));
  return m;
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& names) {
  os << "t";
  for (const auto& n : names) os << "," << n;
  os << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << traj.times[k];
    for (double v : traj.states[k]) os << "," << v;
    os << "\n";
  }
}

void write_csv(const std::string& path, const Trajectory& traj, const std::vector<std::string>& names) {
  std::ofstream f(path);
  if (!f) throw Error("IOError", "cannot open " + path);
  write_csv(f, traj, names);
}

}  // namespace geored::flow
