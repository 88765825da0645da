// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/lagsym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geored/error.hpp"

namespace geored::lagsym {

namespace {

Eigen::MatrixXd to_eigen(const Mat<double>& m) {
  Eigen::MatrixXd r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r(i, j) = m(i, j);
  return r;
}

template <class T>
using scalar_of = std::remove_cvref_t<T>;

template <class T>
T velocity_square(std::span<const T> z, const MetricSignature& sig) {
  return sig.square<T>(z.subspan(4, 4));
}

template <class T>
Mat<T> rel_connection(std::span<const T> z, const MetricSignature& sig) {
  const T v2 = velocity_square(z, sig);
  if (value_of(v2) <= 0.0) throw NotTimelike("connection evaluated at a non-timelike velocity");
  T s(0.0);
  for (std::size_t mu = 0; mu < 4; ++mu) s += sig[mu] * z[4 + mu] * z[mu];
  std::vector<T> alpha(8, T(0.0)), beta(8, T(0.0)), delta(8, T(0.0)), gamma(8, T(0.0));
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const T vl = sig[mu] * z[4 + mu];
    const T xl = sig[mu] * z[mu];
    alpha[4 + mu] = vl / v2;
    beta[mu] = vl / v2;
    beta[4 + mu] = xl / v2 - s * vl / (v2 * v2);
    delta[4 + mu] = z[4 + mu];
    gamma[mu] = z[4 + mu];
  }
  Mat<T> A = Mat<T>::identity(8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) A(i, j) -= delta[i] * alpha[j] + gamma[i] * beta[j];
  return A;
}

// kappa * eta^{mu mu} A(d/dx^mu) ^ A(d/dv^mu) with kappa = |v| / (m c).
template <class T>
Mat<T> rel_bivector(std::span<const T> z, const MetricSignature& sig, double mc) {
  const Mat<T> A = rel_connection(z, sig);
  const T kappa = sqrt(velocity_square(z, sig)) / mc;
  Mat<T> L(8, 8);
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const double e = sig[mu];
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        L(i, j) += e * (A(i, mu) * A(j, 4 + mu) - A(i, 4 + mu) * A(j, mu));
      }
  }
  for (auto& x : L.a) x *= kappa;
  return L;
}

std::vector<std::vector<double>> null_space(const Eigen::MatrixXd& M, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  std::vector<std::vector<double>> out;
  for (Eigen::Index k = 0; k < M.cols(); ++k) {
    const double sk = k < s.size() ? s(k) : 0.0;
    if (sk <= tol * smax || smax == 0.0) {
      Eigen::VectorXd col = svd.matrixV().col(k);
      out.emplace_back(col.data(), col.data() + col.size());
    }
  }
  return out;
}

Eigen::MatrixXd column_space(const Eigen::MatrixXd& M, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol * smax) ++r;
  return svd.matrixU().leftCols(r);
}

int numeric_rank(const Eigen::MatrixXd& M, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol * s(0)) ++r;
  return r;
}

}  // namespace

void MetricSignature::validate() const {
  for (double d : diag)
    if (d != 1.0 && d != -1.0) throw DomainError("metric signature entries must be +1 or -1");
}

LagrangianModel natural(std::size_t n, const ScalarField& U, std::string label) {
  if (U.arity() != n) throw EvaluationError("natural: potential arity must equal n");
  ScalarField L = ScalarField::make(2 * n, label, [n, U](auto z) {
    using T = scalar_of<decltype(z[0])>;
    T k(0.0);
    for (std::size_t i = 0; i < n; ++i) k += 0.5 * z[n + i] * z[n + i];
    return k - U.eval<T>(z.first(n));
  });
  return {n, std::move(L), std::move(label)};
}

LagrangianModel relativistic_free(double m, double c, MetricSignature sig) {
  sig.validate();
  const double mc = m * c;
  ScalarField L = ScalarField::make(8, "relativistic", [mc, sig](auto z) {
    using T = scalar_of<decltype(z[0])>;
    const T v2 = velocity_square<T>(z, sig);
    if (value_of(v2) <= 0.0) throw DomainError("relativistic Lagrangian needs a timelike velocity");
    return mc * sqrt(v2);
  });
  return {4, std::move(L), "relativistic"};
}

std::vector<double> cartan_one_form(const LagrangianModel& model, std::span<const double> z) {
  auto g = calc::gradient(model.L, z);
  std::vector<double> theta(2 * model.n, 0.0);
  for (std::size_t i = 0; i < model.n; ++i) theta[i] = g[model.n + i];
  return theta;
}

double energy(const LagrangianModel& model, std::span<const double> z) {
  auto g = calc::gradient(model.L, z);
  double e = -model.L(z);
  for (std::size_t i = 0; i < model.n; ++i) e += z[model.n + i] * g[model.n + i];
  return e;
}

Regularity is_regular(const LagrangianModel& model, std::span<const double> z, double tol) {
  const std::size_t n = model.n;
  Eigen::MatrixXd H = calc::hessian(model.L, z).bottomRightCorner(n, n);
  Regularity r;
  r.det = H.determinant();
  r.rank = numeric_rank(H, tol);
  r.regular = r.rank == static_cast<int>(n);
  return r;
}

TwoFormAtPoint lagrangian_two_form(const LagrangianModel& model, std::span<const double> z) {
  if (z.size() != 2 * model.n) throw EvaluationError("two-form: point has wrong dimension");
  Eigen::MatrixXd W = to_eigen(two_form_t<double>(model, z));
  if (!W.allFinite()) throw EvaluationError("two-form: non-finite entry");
  return {W, std::vector<double>(z.begin(), z.end())};
}

std::vector<double> el_field(const LagrangianModel& model, std::span<const double> z) {
  if (!is_regular(model, z).regular) {
    throw DegenerateLagrangian("Euler-Lagrange field undefined for a degenerate Lagrangian; use kernel_basis "
                               "and a connection bracket");
  }
  const std::size_t n = model.n;
  Eigen::MatrixXd W = lagrangian_two_form(model, z).matrix;
  auto g = calc::gradient(model.L, z);
  Eigen::MatrixXd H = calc::hessian(model.L, z);
  Eigen::VectorXd dE(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = -g[i], sv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sq += z[n + j] * H(n + j, i);
      sv += z[n + j] * H(n + j, n + i);
    }
    dE(i) = sq;
    dE(n + i) = sv;
  }
  // i_X omega = W^T X = -W X
  Eigen::VectorXd X = W.fullPivLu().solve(-dE);
  std::vector<double> out(X.data(), X.data() + X.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(out[i] - z[n + i]) > 1e-8 * (1.0 + std::abs(z[n + i]))) {
      throw EvaluationError("Euler-Lagrange field is not second order", i);
    }
  }
  return out;
}

PoissonTensor regular_tensor(const LagrangianModel& model) {
  return PoissonTensor::make(2 * model.n, model.label + ":regular", [model](auto z) {
    using T = scalar_of<decltype(z[0])>;
    Mat<T> W = two_form_t<T>(model, z);
    Mat<T> P = solve(W, Mat<T>::identity(W.rows));
    for (auto& x : P.a) x = -x;
    return P;
  });
}

double pb_regular(const LagrangianModel& model, const ScalarField& f, const ScalarField& g,
                  std::span<const double> z) {
  if (!is_regular(model, z).regular) throw DegenerateLagrangian("bracket needs a regular Lagrangian");
  return bracket(regular_tensor(model), f, g, z);
}

std::vector<std::vector<double>> kernel_basis(const TwoFormAtPoint& omega, double tol) {
  return null_space(omega.matrix, tol);
}

double span_residual(const std::vector<std::vector<double>>& basis, std::span<const double> v) {
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  for (const auto& b : basis) {
    Eigen::Map<const Eigen::VectorXd> e(b.data(), static_cast<Eigen::Index>(b.size()));
    r -= e.dot(r) * e;
  }
  return r.norm();
}

NewtonWigner newton_wigner(std::span<const double> z, const MetricSignature& sig) {
  if (z.size() != 8) throw EvaluationError("newton_wigner expects (x, v) in R^8");
  const double v2 = velocity_square(z, sig);
  if (!(v2 > 0.0)) throw NotTimelike("Newton-Wigner coordinates need a timelike velocity");
  if (z[4] == 0.0) throw ZeroTimeVelocity("Newton-Wigner coordinates need a nonzero time velocity");
  const double L = std::sqrt(v2);
  NewtonWigner nw;
  for (std::size_t j = 0; j < 3; ++j) {
    nw.Q[j] = -z[1 + j] + z[5 + j] / z[4] * z[0];
    nw.P[j] = z[5 + j] / L;
  }
  return nw;
}

ScalarField nw_position(std::size_t j, MetricSignature sig) {
  return ScalarField::make(8, "Q" + std::to_string(j + 1), [j, sig](auto z) {
    using T = scalar_of<decltype(z[0])>;
    if (value_of(velocity_square<T>(z, sig)) <= 0.0) throw NotTimelike("Q: non-timelike velocity");
    return -z[1 + j] + z[5 + j] / z[4] * z[0];
  });
}

ScalarField nw_momentum(std::size_t j, MetricSignature sig) {
  return ScalarField::make(8, "P" + std::to_string(j + 1), [j, sig](auto z) {
    using T = scalar_of<decltype(z[0])>;
    const T v2 = velocity_square<T>(z, sig);
    if (value_of(v2) <= 0.0) throw NotTimelike("P: non-timelike velocity");
    return z[5 + j] / sqrt(v2);
  });
}

Eigen::MatrixXd ConnectionField::matrix(std::span<const double> z) const {
  if (z.size() != dim) throw EvaluationError("connection '" + label + "': wrong dimension");
  return to_eigen(A(z));
}

ConnectionCheck inspect_connection(const LagrangianModel& model, const ConnectionField& A,
                                   std::span<const double> z) {
  Eigen::MatrixXd M = A.matrix(z);
  Eigen::MatrixXd W = lagrangian_two_form(model, z).matrix;
  ConnectionCheck c;
  c.idempotency = (M * M - M).cwiseAbs().maxCoeff();
  c.rank_A = numeric_rank(M, 1e-8);
  c.kernel_dim_omega = static_cast<int>(null_space(W, 1e-8).size());
  const double scale = 1.0 + W.cwiseAbs().maxCoeff();
  for (const auto& k : null_space(M, 1e-8)) {
    Eigen::Map<const Eigen::VectorXd> kv(k.data(), static_cast<Eigen::Index>(k.size()));
    c.kernel_residual = std::max(c.kernel_residual, (W * kv).cwiseAbs().maxCoeff() / scale);
  }
  return c;
}

void validate_connection(const LagrangianModel& model, const ConnectionField& A, std::span<const double> z,
                         double tol) {
  const ConnectionCheck c = inspect_connection(model, A, z);
  if (c.idempotency > tol) {
    throw ConnectionInvalid("connection is not a projector: |A^2 - A| = " + std::to_string(c.idempotency));
  }
  if (c.kernel_residual > tol || c.rank_A + c.kernel_dim_omega != static_cast<int>(A.dim)) {
    throw ConnectionInvalid("kernel of the connection differs from the kernel of the two-form");
  }
}

ConnectionField relativistic_connection(double m, double c, MetricSignature sig) {
  sig.validate();
  const double mc = m * c;
  ConnectionField A;
  A.dim = 8;
  A.label = "relativistic";
  A.A = [sig](std::span<const double> z) { return rel_connection<double>(z, sig); };
  A.A1 = [sig](std::span<const D1> z) { return rel_connection<D1>(z, sig); };
  A.bivector = PoissonTensor::make(8, "relativistic:presymplectic", [sig, mc](auto z) {
    using T = scalar_of<decltype(z[0])>;
    return rel_bivector<T>(z, sig, mc);
  });
  return A;
}

Eigen::MatrixXd generic_bivector(const LagrangianModel& model, const ConnectionField& A,
                                 std::span<const double> z) {
  Eigen::MatrixXd B = column_space(A.matrix(z), 1e-8);
  Eigen::MatrixXd W = lagrangian_two_form(model, z).matrix;
  Eigen::MatrixXd Wr = B.transpose() * W * B;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Wr);
  if (!lu.isInvertible()) throw ConnectionInvalid("two-form is degenerate on the image of the connection");
  return -B * lu.inverse() * B.transpose();
}

PoissonTensor presymplectic_tensor(const LagrangianModel& model, const ConnectionField& A) {
  if (A.bivector) return *A.bivector;
  return PoissonTensor::make<0>(A.dim, model.label + ":presymplectic", [model, A](std::span<const double> z) {
    Eigen::MatrixXd L = generic_bivector(model, A, z);
    Mat<double> m(L.rows(), L.cols());
    for (Eigen::Index i = 0; i < L.rows(); ++i)
      for (Eigen::Index j = 0; j < L.cols(); ++j) m(i, j) = L(i, j);
    return m;
  });
}

double presymplectic_bracket(const LagrangianModel& model, const ConnectionField& A, const ScalarField& f,
                             const ScalarField& g, std::span<const double> z) {
  validate_connection(model, A, z);
  return bracket(presymplectic_tensor(model, A), f, g, z);
}

Compatibility compatibility(const LagrangianModel& model, const Eigen::MatrixXd& Lambda,
                            std::span<const double> z, double tol) {
  Eigen::MatrixXd W = lagrangian_two_form(model, z).matrix;
  Compatibility c;
  // omega as a map X -> i_X omega is W^T
  Eigen::MatrixXd lhs = Lambda * W.transpose() * Lambda;
  c.lambda_omega_lambda = (lhs - Lambda).cwiseAbs().maxCoeff() / (1.0 + Lambda.cwiseAbs().maxCoeff());
  Eigen::MatrixXd im = column_space(W.transpose(), tol);
  auto ker = null_space(Lambda, tol);
  Eigen::MatrixXd stack(W.rows(), im.cols() + static_cast<Eigen::Index>(ker.size()));
  stack.leftCols(im.cols()) = im;
  for (std::size_t k = 0; k < ker.size(); ++k)
    stack.col(im.cols() + static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXd>(ker[k].data(), static_cast<Eigen::Index>(ker[k].size()));
  if (stack.cols() == 0) {
    c.kernel_image_sigma = 0.0;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
    c.kernel_image_sigma = svd.singularValues().minCoeff();
  }
  const bool spans = stack.cols() == W.rows();
  c.ok = c.lambda_omega_lambda < tol && spans && c.kernel_image_sigma > tol;
  return c;
}

nlohmann::json bracket_table(double m, double c, std::span<const double> z, MetricSignature sig) {
  const LagrangianModel model = relativistic_free(m, c, sig);
  const ConnectionField A = relativistic_connection(m, c, sig);
  validate_connection(model, A, z);
  const PoissonTensor P = presymplectic_tensor(model, A);
  std::vector<ScalarField> coords;
  const char* names[8] = {"x0", "x1", "x2", "x3", "v0", "v1", "v2", "v3"};
  for (std::size_t i = 0; i < 8; ++i) coords.push_back(coordinate(8, i, names[i]));
  const Eigen::MatrixXd Lm = P.matrix(z);
  const double L = model.L(z);
  const double mc = m * c;

  nlohmann::json pairs = nlohmann::json::array();
  double num = 0.0, den = 0.0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = r + 1; s < 4; ++s) {
      const double val = Lm(r, s);
      pairs.push_back({{"f", names[r]}, {"g", names[s]}, {"value", val}});
      const double pattern = z[4 + s] * z[r] - z[4 + r] * z[s];
      num += val * pattern;
      den += pattern * pattern;
    }
  const double k = den > 0.0 ? num / den : 0.0;
  double spread = 0.0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t s = r + 1; s < 4; ++s) {
      const double pattern = z[4 + s] * z[r] - z[4 + r] * z[s];
      spread = std::max(spread, std::abs(Lm(r, s) - k * pattern));
    }
  double vx_dev = 0.0, vv_max = 0.0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t s = 0; s < 4; ++s) {
      const double val = Lm(4 + r, s);
      pairs.push_back({{"f", names[4 + r]}, {"g", names[s]}, {"value", val}});
      const double eta = r == s ? sig[r] : 0.0;
      const double reference = L * (eta - mc * mc * z[4 + r] * z[4 + s] / (L * L));
      vx_dev = std::max(vx_dev, std::abs(val - reference));
    }
    for (std::size_t s = r + 1; s < 4; ++s) {
      pairs.push_back({{"f", names[4 + r]}, {"g", names[4 + s]}, {"value", Lm(4 + r, 4 + s)}});
      vv_max = std::max(vv_max, std::abs(Lm(4 + r, 4 + s)));
    }
  }
  nlohmann::json residuals = {
      {"xx_prefactor_measured", k},
      {"xx_prefactor_reference", mc * mc / L},
      {"xx_pattern_residual", spread},
      {"vx_deviation_from_reference", vx_dev},
      {"vv_max", vv_max},
      {"lagrangian", L},
  };
  return {{"point", std::vector<double>(z.begin(), z.end())}, {"pairs", pairs}, {"residuals", residuals}};
}

std::vector<double> random_timelike_point(Rng& rng, const MetricSignature& sig) {
  std::vector<double> z(8);
  for (std::size_t i = 0; i < 4; ++i) z[i] = rng.uniform(-2.0, 2.0);
  const double lam = rng.uniform(0.5, 2.0);
  std::array<double, 3> u{};
  for (auto& ui : u) ui = rng.uniform(-0.5, 0.5);
  z[4] = lam;
  for (std::size_t j = 0; j < 3; ++j) z[5 + j] = lam * u[j];
  if (velocity_square<double>(std::span<const double>(z), sig) <= 0.0) {
    throw DomainError("random_timelike_point: signature has no timelike direction along index 0");
  }
  return z;
}

}  // namespace geored::lagsym
