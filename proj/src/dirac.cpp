// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geored/error.hpp"

namespace geored::dirac {

namespace {

template <class T>
using scalar_of = std::remove_cvref_t<T>;

template <class T>
T mdot(const MetricSignature& s, const T* a, const T* b) {
  T r(0.0);
  for (std::size_t mu = 0; mu < 4; ++mu) r += s[mu] * a[mu] * b[mu];
  return r;
}

// Canonical P applied to a gradient: (P dv)_x = g dv/dp, (P dv)_p = -g dv/dx.
template <class T>
std::vector<T> canonical_apply(const PhaseSpace& sp, const std::vector<T>& dv) {
  std::vector<T> out(dv.size(), T(0.0));
  for (std::size_t a = 0; a < sp.particles; ++a)
    for (std::size_t mu = 0; mu < 4; ++mu) {
      const double g = sp.signature[mu];
      out[sp.x(a, mu)] = g * dv[sp.p(a, mu)];
      out[sp.p(a, mu)] = -g * dv[sp.x(a, mu)];
    }
  return out;
}

template <class T>
Mat<T> canonical_matrix(const PhaseSpace& sp) {
  Mat<T> P(sp.arity(), sp.arity());
  for (std::size_t a = 0; a < sp.particles; ++a)
    for (std::size_t mu = 0; mu < 4; ++mu) {
      P(sp.x(a, mu), sp.p(a, mu)) = sp.signature[mu];
      P(sp.p(a, mu), sp.x(a, mu)) = -sp.signature[mu];
    }
  return P;
}

template <class T>
Mat<T> dirac_matrix(const ConstraintSet& set, std::span<const T> z) {
  const PhaseSpace& sp = set.space;
  Mat<T> P = canonical_matrix<T>(sp);
  const std::size_t k = set.size();
  if (k == 0) return P;
  const std::size_t n = sp.arity();
  std::vector<std::vector<T>> grad(k), u(k);
  for (std::size_t a = 0; a < k; ++a) {
    grad[a] = calc::gradient_t<T>(set.constraints[a].f, z);
    u[a] = canonical_apply(sp, grad[a]);
  }
  Mat<T> C(k, k), Wm(k, n);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      T s(0.0);
      for (std::size_t i = 0; i < n; ++i) s += grad[a][i] * u[b][i];
      C(a, b) = s;
    }
    // row dv_a^T P = -(P dv_a)^T
    for (std::size_t i = 0; i < n; ++i) Wm(a, i) = -u[a][i];
  }
  Mat<T> Y = solve(C, Wm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T s(0.0);
      for (std::size_t a = 0; a < k; ++a) s += u[a][i] * Y(a, j);
      P(i, j) -= s;
    }
  return P;
}

std::vector<double> full_point(std::span<const double> state, double tau) {
  std::vector<double> z(state.begin(), state.end());
  z.push_back(tau);
  return z;
}

double condition_number(const Eigen::MatrixXd& C) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  return smin == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / smin;
}

std::size_t lorentz_id(std::size_t mu, std::size_t nu) {
  static const std::size_t table[4][4] = {{99, 0, 1, 2}, {99, 99, 3, 4}, {99, 99, 99, 5}, {99, 99, 99, 99}};
  return table[mu][nu];
}

const std::array<std::array<std::size_t, 2>, 6> kPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace

ScalarField PhaseSpace::x_field(std::size_t a, std::size_t mu) const {
  return coordinate(arity(), x(a, mu), "x" + std::to_string(a + 1) + "^" + std::to_string(mu));
}

ScalarField PhaseSpace::p_field(std::size_t a, std::size_t mu) const {
  return coordinate(arity(), p(a, mu), "p" + std::to_string(a + 1) + "^" + std::to_string(mu));
}

std::vector<ScalarField> PhaseSpace::coordinates() const {
  std::vector<ScalarField> out;
  for (std::size_t a = 0; a < particles; ++a) {
    for (std::size_t mu = 0; mu < 4; ++mu) out.push_back(x_field(a, mu));
    for (std::size_t mu = 0; mu < 4; ++mu) out.push_back(p_field(a, mu));
  }
  return out;
}

std::vector<double> ConstraintSet::values(std::span<const double> z) const {
  std::vector<double> v;
  for (const auto& c : constraints) v.push_back(c.f(z));
  return v;
}

double ConstraintSet::violation(std::span<const double> z) const {
  double m = 0.0;
  for (double v : values(z)) m = std::max(m, std::abs(v));
  return m;
}

double tau_sensitivity(const Constraint& c, std::span<const double> z) {
  std::vector<double> zp(z.begin(), z.end()), zm = zp;
  const double h = 1e-4;
  zp.back() += h;
  zm.back() -= h;
  return std::abs(c.f(zp) - c.f(zm)) / (2 * h);
}

InteractionPotential InteractionPotential::linear(double lambda) {
  return {ScalarField::make(1, "V", [lambda](auto xi) { return lambda * xi[0]; })};
}

double InteractionPotential::value(double xi) const { return V(std::vector{xi}); }

double InteractionPotential::derivative(double xi) const { return calc::gradient(V, std::vector{xi})[0]; }

PoissonTensor canonical_tensor(const PhaseSpace& space) {
  return PoissonTensor::make(space.arity(), "canonical", [space](auto z) {
    using T = scalar_of<decltype(z[0])>;
    return canonical_matrix<T>(space);
  });
}

double canonical_pb(const PhaseSpace& space, const ScalarField& f, const ScalarField& g,
                    std::span<const double> z) {
  if (f.arity() != space.arity() || g.arity() != space.arity()) {
    throw EvaluationError("canonical_pb: field arity must be 8N + 1");
  }
  return bracket(canonical_tensor(space), f, g, z);
}

PoincareGenerators poincare_generators(const PhaseSpace& space) {
  PoincareGenerators G;
  for (const auto& pr : kPairs) {
    const std::size_t mu = pr[0], nu = pr[1];
    G.J_index.push_back(pr);
    G.J.push_back(ScalarField::make(space.arity(), "J" + std::to_string(mu) + std::to_string(nu),
                                    [space, mu, nu](auto z) {
                                      using T = scalar_of<decltype(z[0])>;
                                      const auto& s = space.signature;
                                      T r(0.0);
                                      for (std::size_t a = 0; a < space.particles; ++a) {
                                        r += s[mu] * s[nu] *
                                             (z[space.x(a, mu)] * z[space.p(a, nu)] -
                                              z[space.x(a, nu)] * z[space.p(a, mu)]);
                                      }
                                      return r;
                                    }));
  }
  for (std::size_t mu = 0; mu < 4; ++mu) {
    G.P.push_back(ScalarField::make(space.arity(), "P" + std::to_string(mu), [space, mu](auto z) {
      using T = scalar_of<decltype(z[0])>;
      T r(0.0);
      for (std::size_t a = 0; a < space.particles; ++a) r += space.signature[mu] * z[space.p(a, mu)];
      return r;
    }));
  }
  return G;
}

Eigen::MatrixXd full_constraint_matrix(const ConstraintSet& set, std::span<const double> z) {
  const std::size_t k = set.size();
  std::vector<std::vector<double>> grad(k), u(k);
  for (std::size_t a = 0; a < k; ++a) {
    grad[a] = calc::gradient(set.constraints[a].f, z);
    u[a] = canonical_apply(set.space, grad[a]);
  }
  Eigen::MatrixXd C(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < grad[a].size(); ++i) s += grad[a][i] * u[b][i];
      C(a, b) = s;
    }
  return C;
}

Eigen::MatrixXd constraint_matrix(const ConstraintSet& set, std::span<const double> z, double surface_tol) {
  auto v = set.values(z);
  for (std::size_t a = 0; a < v.size(); ++a) {
    if (std::abs(v[a]) > surface_tol) {
      throw OffSurface("constraint " + set.constraints[a].label + " = " + std::to_string(v[a]), a);
    }
  }
  return full_constraint_matrix(set, z);
}

void check_admissible(const ConstraintSet& set, std::span<const double> z) {
  if (set.size() == 0) return;
  const double cond = condition_number(full_constraint_matrix(set, z));
  if (!(cond < 1e10)) {
    throw SingularConstraintMatrix("constraint matrix condition number " + std::to_string(cond));
  }
}

PoissonTensor dirac_tensor(const ConstraintSet& set) {
  return PoissonTensor::make(set.space.arity(), "dirac", [set](auto z) {
    using T = scalar_of<decltype(z[0])>;
    return dirac_matrix<T>(set, z);
  });
}

double dirac_bracket(const ConstraintSet& set, const ScalarField& f, const ScalarField& g,
                     std::span<const double> z) {
  check_admissible(set, z);
  return bracket(dirac_tensor(set), f, g, z);
}

double casimir_residual(const ConstraintSet& set, std::span<const double> z) {
  const auto PD = dirac_tensor(set);
  double worst = 0.0;
  for (const auto& f : set.space.coordinates())
    for (const auto& c : set.constraints) worst = std::max(worst, std::abs(bracket(PD, f, c.f, z)));
  return worst;
}

double dirac_jacobi_max(const ConstraintSet& set, std::span<const double> z, Exec ex) {
  const auto PD = dirac_tensor(set);
  const auto coords = set.space.coordinates();
  const std::size_t n = coords.size();
  std::vector<std::array<std::size_t, 3>> triples;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) triples.push_back({i, j, k});
  return max_over(ex, triples.size(), [&](std::size_t t) {
    const auto& [i, j, k] = triples[t];
    return jacobi_residual(PD, coords[i], coords[j], coords[k], z);
  });
}

double poincare_agreement(const ConstraintSet& set, std::span<const double> z) {
  const auto G = poincare_generators(set.space);
  std::vector<ScalarField> gens = G.J;
  gens.insert(gens.end(), G.P.begin(), G.P.end());
  const auto PC = canonical_tensor(set.space);
  const auto PD = dirac_tensor(set);
  double worst = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      worst = std::max(worst, std::abs(bracket(PC, gens[i], gens[j], z) - bracket(PD, gens[i], gens[j], z)));
  return worst;
}

ConsistencySweep consistency_sweep(const ConstraintSet& set, const std::vector<std::vector<double>>& points,
                                   std::size_t jacobi_points, Exec ex) {
  ConsistencySweep out;
  out.points = points.size();
  out.casimir_max = max_over(ex, points.size(), [&](std::size_t i) { return casimir_residual(set, points[i]); });
  out.poincare_max = max_over(ex, points.size(), [&](std::size_t i) { return poincare_agreement(set, points[i]); });
  const std::size_t nj = std::min(jacobi_points, points.size());
  for (std::size_t i = 0; i < nj; ++i) out.jacobi_max = std::max(out.jacobi_max, dirac_jacobi_max(set, points[i], ex));
  return out;
}

TwoParticleModel two_particle_model(double m1, double m2, InteractionPotential V, Gauge gauge) {
  PhaseSpace sp{2, {}};
  const MetricSignature sig = sp.signature;
  TwoParticleModel model;
  model.m1 = m1;
  model.m2 = m2;
  model.V = V;
  model.gauge = gauge;
  model.xi = ScalarField::make(sp.arity(), "xi", [sig](auto z) {
    using T = scalar_of<decltype(z[0])>;
    T r[4], P[4];
    for (std::size_t mu = 0; mu < 4; ++mu) {
      r[mu] = 0.5 * (z[mu] - z[8 + mu]);
      P[mu] = z[4 + mu] + z[12 + mu];
    }
    const T pr = mdot<T>(sig, P, r);
    return mdot<T>(sig, r, r) - pr * pr / mdot<T>(sig, P, P);
  });
  auto mass_shell = [sig, V, xi = model.xi](std::size_t a, double m) {
    return ScalarField::make(17, "K" + std::to_string(a + 1), [sig, V, xi, a, m](auto z) {
      using T = scalar_of<decltype(z[0])>;
      const T* p = &z[8 * a + 4];
      std::array<T, 1> x{xi.eval<T>(z)};
      return mdot<T>(sig, p, p) - m * m + V.V.eval<T>(std::span<const T>(x));
    });
  };
  std::vector<Constraint> cs;
  cs.push_back({"K1", mass_shell(0, m1), false, Role::MASS_SHELL});
  cs.push_back({"K2", mass_shell(1, m2), false, Role::MASS_SHELL});
  if (gauge == Gauge::DYNAMICAL) {
    cs.push_back({"chi1", ScalarField::make(17, "chi1", [sig](auto z) {
                    using T = scalar_of<decltype(z[0])>;
                    T r[4], P[4];
                    for (std::size_t mu = 0; mu < 4; ++mu) {
                      r[mu] = 0.5 * (z[mu] - z[8 + mu]);
                      P[mu] = z[4 + mu] + z[12 + mu];
                    }
                    return mdot<T>(sig, P, r);
                  }),
                  false, Role::GAUGE});
    cs.push_back({"chi2", ScalarField::make(17, "chi2", [sig](auto z) {
                    using T = scalar_of<decltype(z[0])>;
                    T X[4], P[4];
                    for (std::size_t mu = 0; mu < 4; ++mu) {
                      X[mu] = 0.5 * (z[mu] + z[8 + mu]);
                      P[mu] = z[4 + mu] + z[12 + mu];
                    }
                    return mdot<T>(sig, P, X) - z[16];
                  }),
                  true, Role::GAUGE});
  } else {
    cs.push_back({"chi1", ScalarField::make(17, "chi1", [](auto z) { return z[0] - z[8]; }), false, Role::GAUGE});
    cs.push_back({"chi2", ScalarField::make(17, "chi2", [](auto z) { return 0.5 * (z[0] + z[8]) - z[16]; }), true,
                  Role::GAUGE});
  }
  model.set = {sp, std::move(cs)};
  return model;
}

ConstraintSet free_particle(double m) {
  PhaseSpace sp{1, {}};
  const MetricSignature sig = sp.signature;
  std::vector<Constraint> cs;
  cs.push_back({"K", ScalarField::make(9, "K", [sig, m](auto z) {
                  using T = scalar_of<decltype(z[0])>;
                  return mdot<T>(sig, &z[4], &z[4]) - m * m;
                }),
                false, Role::MASS_SHELL});
  cs.push_back({"chi", ScalarField::make(9, "chi", [](auto z) { return z[0] - z[8]; }), true, Role::GAUGE});
  return {sp, std::move(cs)};
}

std::vector<double> sample_on_shell(const TwoParticleModel& model, Rng& rng, double tau) {
  const auto& sig = model.set.space.signature;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> z(17, 0.0);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t mu = 0; mu < 4; ++mu) z[8 * a + mu] = rng.uniform(-1.0, 1.0);
      for (std::size_t j = 1; j < 4; ++j) z[8 * a + 4 + j] = rng.uniform(-0.5, 0.5);
    }
    z[16] = tau;
    if (model.gauge == Gauge::KINEMATICAL) {
      z[0] = tau;
      z[8] = tau;
    }
    const double m[2] = {model.m1, model.m2};
    for (std::size_t a = 0; a < 2; ++a) {
      double s = m[a] * m[a];
      for (std::size_t j = 1; j < 4; ++j) s += z[8 * a + 4 + j] * z[8 * a + 4 + j];
      z[8 * a + 4] = std::sqrt(s);
    }
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      Eigen::Vector2d F;
      Eigen::Matrix2d J;
      for (std::size_t a = 0; a < 2; ++a) {
        F(a) = model.set.constraints[a].f(z);
        auto g = calc::gradient(model.set.constraints[a].f, z);
        J(a, 0) = g[4];
        J(a, 1) = g[12];
      }
      if (F.cwiseAbs().maxCoeff() < 1e-13) {
        converged = true;
        break;
      }
      Eigen::Vector2d d = J.fullPivLu().solve(F);
      z[4] -= d(0);
      z[12] -= d(1);
    }
    if (!converged || z[4] <= 0.0 || z[12] <= 0.0) continue;
    if (model.gauge == Gauge::DYNAMICAL) {
      double P[4], r[4], X[4];
      for (std::size_t mu = 0; mu < 4; ++mu) {
        P[mu] = z[4 + mu] + z[12 + mu];
        r[mu] = 0.5 * (z[mu] - z[8 + mu]);
        X[mu] = 0.5 * (z[mu] + z[8 + mu]);
      }
      const double P2 = mdot<double>(sig, P, P);
      const double c = -mdot<double>(sig, P, r) / P2;
      const double d = (tau - mdot<double>(sig, P, X)) / P2;
      for (std::size_t mu = 0; mu < 4; ++mu) {
        z[mu] += (c + d) * P[mu];
        z[8 + mu] += (d - c) * P[mu];
      }
    }
    if (model.set.violation(z) < 1e-11) return z;
  }
  throw DomainError("sample_on_shell: could not reach the constraint surface");
}

Eigen::Matrix2d cross_block(const TwoParticleModel& model, std::span<const double> z) {
  const auto& cs = model.set.constraints;
  const PhaseSpace& sp = model.set.space;
  Eigen::Matrix2d B;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) B(a, b) = canonical_pb(sp, cs[2 + a].f, cs[b].f, z);
  return B;
}

namespace {
struct Invariants {
  double p1p1, p2p2, p1p2, Pr, P2, Vp;
};
Invariants invariants(const TwoParticleModel& model, std::span<const double> z) {
  const auto& sig = model.set.space.signature;
  double P[4], r[4];
  for (std::size_t mu = 0; mu < 4; ++mu) {
    P[mu] = z[4 + mu] + z[12 + mu];
    r[mu] = 0.5 * (z[mu] - z[8 + mu]);
  }
  Invariants in{};
  in.p1p1 = mdot<double>(sig, &z[4], &z[4]);
  in.p2p2 = mdot<double>(sig, &z[12], &z[12]);
  in.p1p2 = mdot<double>(sig, &z[4], &z[12]);
  in.Pr = mdot<double>(sig, P, r);
  in.P2 = mdot<double>(sig, P, P);
  in.Vp = model.V.derivative(model.xi(z));
  return in;
}
}  // namespace

double reference_determinant(const TwoParticleModel& model, std::span<const double> z) {
  const Invariants in = invariants(model, z);
  const double P4 = in.P2 * in.P2;
  return (in.p1p1 - in.p2p2) * (in.Pr * in.Pr / P4 - 2.0 / P4 * in.Vp);
}

Eigen::Matrix2d reference_block(const TwoParticleModel& model, std::span<const double> z) {
  const Invariants in = invariants(model, z);
  const double P4 = in.P2 * in.P2;
  Eigen::Matrix2d B;
  B << in.p1p1 + in.p1p2 + in.Vp, in.p1p2 + in.p2p2 + 2.0 / P4 * in.Vp,
      in.p1p1 + in.p1p2 + in.Pr * in.Pr / P4, in.p1p2 + in.p2p2 + in.Pr * in.Pr / P4;
  return B;
}

std::vector<double> constrained_velocity(const ConstraintSet& set, std::span<const double> z) {
  const std::size_t k = set.size();
  const std::size_t n = set.space.dim();
  std::vector<std::vector<double>> u(k);
  Eigen::VectorXd dtau(k);
  Eigen::MatrixXd C(k, k);
  std::vector<std::vector<double>> grad(k);
  for (std::size_t a = 0; a < k; ++a) {
    grad[a] = calc::gradient(set.constraints[a].f, z);
    u[a] = canonical_apply(set.space, grad[a]);
    dtau(a) = grad[a][n];
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += grad[a][i] * u[b][i];
      C(a, b) = s;
    }
  if (!(condition_number(C) < 1e10)) throw SingularConstraintMatrix("constraint matrix singular along the flow");
  Eigen::VectorXd y = C.fullPivLu().solve(dtau);
  std::vector<double> zdot(n, 0.0);
  // {z_i, v_a} = (P dv_a)_i
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < n; ++i) zdot[i] -= u[a][i] * y(a);
  return zdot;
}

flow::VectorFieldSystem constrained_system(const ConstraintSet& set) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < set.space.particles; ++a) {
    for (std::size_t mu = 0; mu < 4; ++mu) names.push_back("x" + std::to_string(a + 1) + "_" + std::to_string(mu));
    for (std::size_t mu = 0; mu < 4; ++mu) names.push_back("p" + std::to_string(a + 1) + "_" + std::to_string(mu));
  }
  return flow::VectorFieldSystem::non_autonomous(
      set.space.dim(), "constrained",
      [set](double tau, std::span<const double> x) { return constrained_velocity(set, full_point(x, tau)); },
      names);
}

void project_to_surface(const ConstraintSet& set, std::vector<double>& state, double tau, double tol) {
  const std::size_t k = set.size();
  const std::size_t n = set.space.dim();
  for (int it = 0; it < 20; ++it) {
    auto z = full_point(state, tau);
    Eigen::VectorXd v(k);
    Eigen::MatrixXd J(k, n);
    for (std::size_t a = 0; a < k; ++a) {
      v(a) = set.constraints[a].f(z);
      auto g = calc::gradient(set.constraints[a].f, z);
      for (std::size_t i = 0; i < n; ++i) J(a, i) = g[i];
    }
    if (v.cwiseAbs().maxCoeff() <= tol) return;
    Eigen::VectorXd y = (J * J.transpose()).fullPivLu().solve(v);
    Eigen::VectorXd dz = J.transpose() * y;
    for (std::size_t i = 0; i < n; ++i) state[i] -= dz(i);
  }
}

ConstrainedRun constrained_flow(const ConstraintSet& set, const std::vector<double>& point0, double tau0,
                                double tau1, const ConstrainedFlowConfig& cfg) {
  if (point0.size() != set.space.dim()) throw EvaluationError("constrained_flow: point must have dimension 8N");
  auto z0 = full_point(point0, tau0);
  auto v0 = set.values(z0);
  for (std::size_t a = 0; a < v0.size(); ++a) {
    if (std::abs(v0[a]) > cfg.project_tol) {
      throw OffSurface("constrained_flow: initial point off the surface", a);
    }
  }
  ConstrainedRun run;
  auto icfg = cfg.integrator;
  double* drift = &run.max_drift;
  int* projections = &run.projections;
  const double ptol = cfg.project_tol;
  icfg.projector = [&set, drift, projections, ptol](double t, flow::State& x) {
    const double v = set.violation(full_point(x, t));
    *drift = std::max(*drift, v);
    if (v > ptol) {
      project_to_surface(set, x, t);
      ++*projections;
    }
  };
  run.traj = flow::integrate(constrained_system(set), point0, tau0, tau1, icfg);
  for (std::size_t i = 0; i < run.traj.size(); ++i) {
    const double v = set.violation(full_point(run.traj.states[i], run.traj.times[i]));
    if (v > cfg.drift_limit) {
      throw ConstraintDrift("constraint drift " + std::to_string(v) + " at tau = " + std::to_string(run.traj.times[i]));
    }
  }
  return run;
}

NoncommutativityTable position_noncommutativity(const ConstraintSet& set, std::span<const double> z) {
  check_admissible(set, z);
  Eigen::MatrixXd PD = dirac_tensor(set).matrix(z);
  NoncommutativityTable t;
  for (std::size_t a = 0; a < set.space.particles; ++a) {
    Eigen::Matrix4d m;
    for (std::size_t mu = 0; mu < 4; ++mu)
      for (std::size_t nu = 0; nu < 4; ++nu) m(mu, nu) = PD(set.space.x(a, mu), set.space.x(a, nu));
    t.max_abs = std::max(t.max_abs, m.cwiseAbs().maxCoeff());
    t.table.push_back(m);
  }
  return t;
}

nlohmann::json to_json(const NoncommutativityTable& t) {
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& m : t.table) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
    tables.push_back(rows);
  }
  return {{"tables", tables}, {"max_abs", t.max_abs}};
}

WlcReport wlc_residual(const ConstraintSet& set, const Eigen::Matrix4d& omega, const Eigen::Vector4d& a,
                       std::span<const double> z) {
  const PhaseSpace& sp = set.space;
  const auto& sig = sp.signature;
  check_admissible(set, z);
  ScalarField G = ScalarField::make(sp.arity(), "G", [sp, omega, a](auto w) {
    using T = scalar_of<decltype(w[0])>;
    const auto& s = sp.signature;
    T g(0.0);
    for (std::size_t b = 0; b < sp.particles; ++b) {
      for (const auto& pr : kPairs) {
        const std::size_t mu = pr[0], nu = pr[1];
        g += omega(mu, nu) * s[mu] * s[nu] *
             (w[sp.x(b, mu)] * w[sp.p(b, nu)] - w[sp.x(b, nu)] * w[sp.p(b, mu)]);
      }
      for (std::size_t mu = 0; mu < 4; ++mu) g -= a(mu) * s[mu] * w[sp.p(b, mu)];
    }
    return g;
  });
  Eigen::MatrixXd PD = dirac_tensor(set).matrix(z);
  auto dG = calc::gradient(G, z);
  Eigen::RowVectorXd gP = Eigen::Map<const Eigen::RowVectorXd>(dG.data(), static_cast<Eigen::Index>(dG.size())) * PD;
  auto vel = constrained_velocity(set, z);

  WlcReport r;
  for (std::size_t b = 0; b < sp.particles; ++b) {
    Eigen::Vector4d u, d;
    for (std::size_t mu = 0; mu < 4; ++mu) {
      double rot = 0.0;
      for (std::size_t nu = 0; nu < 4; ++nu) rot += omega(mu, nu) * sig[nu] * z[sp.x(b, nu)];
      u(mu) = gP(sp.x(b, mu)) - rot - a(mu);
      d(mu) = vel[sp.x(b, mu)];
    }
    const double dd = d.squaredNorm();
    const double dt = dd > 0.0 ? u.dot(d) / dd : 0.0;
    const double res = (u - dt * d).cwiseAbs().maxCoeff();
    r.residual.push_back(res);
    r.delta_tau.push_back(dt);
    r.max_residual = std::max(r.max_residual, res);
  }
  return r;
}

nlohmann::json to_json(const WlcReport& r) {
  return {{"residual", r.residual}, {"delta_tau", r.delta_tau}, {"max_residual", r.max_residual}};
}

std::array<std::string, 10> DeformedPoincare::names() {
  return {"x0", "x1", "x2", "x3", "l01", "l02", "l03", "l12", "l13", "l23"};
}

DeformedPoincare deformed_poincare(double K, MetricSignature sig) {
  if (!(K > 0.0)) throw DomainError("deformed_poincare: K must be positive");
  sig.validate();
  DeformedPoincare d;
  d.K = K;
  d.signature = sig;
  auto eta = [&](std::size_t m, std::size_t n) { return m == n ? sig[m] : 0.0; };
  // adds val * l_{mu nu} to a coefficient vector
  auto add_l = [](std::array<double, 10>& c, std::size_t mu, std::size_t nu, double val) {
    if (mu == nu || val == 0.0) return;
    if (mu < nu) c[4 + lorentz_id(mu, nu)] += val;
    else c[4 + lorentz_id(nu, mu)] -= val;
  };
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = 0; s < 4; ++s) add_l(d.c[r][s], r, s, 1.0 / K);
  for (std::size_t i = 0; i < 6; ++i) {
    const std::size_t mu = kPairs[i][0], nu = kPairs[i][1];
    for (std::size_t rho = 0; rho < 4; ++rho) {
      auto& c = d.c[4 + i][rho];
      c[nu] += eta(mu, rho);
      c[mu] -= eta(nu, rho);
      for (std::size_t k = 0; k < 10; ++k) d.c[rho][4 + i][k] = -c[k];
    }
    for (std::size_t j = 0; j < 6; ++j) {
      const std::size_t rho = kPairs[j][0], sg = kPairs[j][1];
      auto& c = d.c[4 + i][4 + j];
      add_l(c, nu, sg, eta(mu, rho));
      add_l(c, nu, rho, -eta(mu, sg));
      add_l(c, mu, sg, -eta(nu, rho));
      add_l(c, mu, rho, eta(nu, sg));
    }
  }
  return d;
}

double DeformedPoincare::jacobi_residual() const {
  double worst = 0.0;
  auto nested = [this](std::size_t i, std::size_t j, std::size_t k, std::size_t m) {
    double s = 0.0;
    for (std::size_t l = 0; l < 10; ++l) s += c[j][k][l] * c[i][l][m];
    return s;
  };
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t k = 0; k < 10; ++k)
        for (std::size_t m = 0; m < 10; ++m) {
          const double r = nested(i, j, k, m) + nested(j, k, i, m) + nested(k, i, j, m);
          worst = std::max(worst, std::abs(r));
        }
  return worst;
}

nlohmann::json DeformedPoincare::to_json() const {
  const auto nm = names();
  nlohmann::json br = nlohmann::json::array();
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i + 1; j < 10; ++j) {
      nlohmann::json terms = nlohmann::json::object();
      for (std::size_t k = 0; k < 10; ++k)
        if (c[i][j][k] != 0.0) terms[nm[k]] = c[i][j][k];
      if (!terms.empty()) br.push_back({{"f", nm[i]}, {"g", nm[j]}, {"value", terms}});
    }
  return {{"K", K}, {"basis", nm}, {"brackets", br}, {"jacobi_residual", jacobi_residual()}};
}

}  // namespace geored::dirac
