// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/qriccati.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <ostream>

namespace geored::qriccati {

namespace {

using cd = std::complex<double>;
const cd I(0.0, 1.0);

void require_hermitian(const CMat& M, const char* what) {
  if ((M - M.adjoint()).norm() > 1e-12) throw DomainError(std::string(what) + " is not Hermitian");
}

}  // namespace

CMat BlockHamiltonian::assembled(double t) const {
  const CMat h1 = H1(t), h2 = H2(t), v = V(t);
  if (h1.rows() != n1 || h1.cols() != n1 || h2.rows() != n2 || h2.cols() != n2 || v.rows() != n1 || v.cols() != n2)
    throw DomainError("Hamiltonian blocks have inconsistent sizes");
  require_hermitian(h1, "H1");
  require_hermitian(h2, "H2");
  CMat H(N(), N());
  H.topLeftCorner(n1, n1) = h1;
  H.topRightCorner(n1, n2) = v;
  H.bottomLeftCorner(n2, n1) = v.adjoint();
  H.bottomRightCorner(n2, n2) = h2;
  return H;
}

BlockHamiltonian BlockHamiltonian::constant(const CMat& H1, const CMat& H2, const CMat& V) {
  BlockHamiltonian h;
  h.n1 = static_cast<int>(H1.rows());
  h.n2 = static_cast<int>(H2.rows());
  h.H1 = [H1](double) { return H1; };
  h.H2 = [H2](double) { return H2; };
  h.V = [V](double) { return V; };
  return h;
}

BlockHamiltonian BlockHamiltonian::random(int n1, int n2, Rng& rng, double bound) {
  const int N = n1 + n2;
  CMat A(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A(i, j) = cd(rng.normal(), rng.normal());
  CMat H = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  H *= bound * rng.uniform(0.5, 1.0) / norm;
  H = 0.5 * (H + H.adjoint()).eval();
  return constant(H.topLeftCorner(n1, n1), H.bottomRightCorner(n2, n2), H.topRightCorner(n1, n2));
}

double unitarity_drift(const CMat& U) {
  return (U.adjoint() * U - CMat::Identity(U.rows(), U.cols())).norm();
}

CMat polar_unitary(const CMat& U) {
  CMat X = U;
  for (int it = 0; it < 50; ++it) {
    CMat Xn = 0.5 * (X + X.adjoint().inverse());
    const double step = (Xn - X).norm();
    X = std::move(Xn);
    if (step < 1e-15 * std::sqrt(static_cast<double>(X.rows()))) break;
  }
  return X;
}

flow::State pack(const CMat& M) {
  flow::State x(2 * static_cast<std::size_t>(M.size()));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      x[k++] = M(i, j).real();
      x[k++] = M(i, j).imag();
    }
  return x;
}

CMat unpack(std::span<const double> x, int rows, int cols) {
  if (x.size() != 2u * static_cast<std::size_t>(rows * cols)) throw DomainError("packed matrix has wrong length");
  CMat M(rows, cols);
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j, k += 2) M(i, j) = cd(x[k], x[k + 1]);
  return M;
}

UnitaryState UnitaryRun::at_end(int N) const { return {unpack(traj.back(), N, N), traj.t1()}; }

UnitaryRun evolve_unitary_run(const BlockHamiltonian& H, const UnitaryState& U0, double t1,
                              const flow::IntegratorConfig& cfg) {
  const int N = H.N();
  if (U0.U.rows() != N || U0.U.cols() != N) throw DomainError("initial unitary has wrong size");
  if (unitarity_drift(U0.U) > 1e-9) throw UnitarityLost("initial state is not unitary");
  H.assembled(U0.t);
  auto sys = flow::VectorFieldSystem::non_autonomous(
      2 * static_cast<std::size_t>(N * N), "schrodinger", [H, N](double t, std::span<const double> x) {
        CMat U = unpack(x, N, N);
        CMat dU = -I * (H.assembled(t) * U);
        return pack(dU);
      });
  UnitaryRun run;
  flow::IntegratorConfig c = cfg;
  c.projector = [&run, N](double t, flow::State& x) {
    CMat U = unpack(x, N, N);
    const double d = unitarity_drift(U);
    if (d > 1e-6) throw UnitarityLost("drift " + std::to_string(d) + " at t = " + std::to_string(t));
    if (d > 1e-12) {
      U = polar_unitary(U);
      ++run.reprojections;
      x = pack(U);
    }
    run.max_drift = std::max(run.max_drift, unitarity_drift(U));
  };
  if (t1 == U0.t) {
    run.traj.times = {t1};
    run.traj.states = {pack(U0.U)};
    run.traj.derivs = {sys(t1, run.traj.states[0])};
    return run;
  }
  run.traj = flow::integrate(sys, pack(U0.U), U0.t, t1, c);
  return run;
}

UnitaryState evolve_unitary(const BlockHamiltonian& H, const UnitaryState& U0, double t1,
                            const flow::IntegratorConfig& cfg) {
  return evolve_unitary_run(H, U0, t1, cfg).at_end(H.N());
}

CosetPoint extract_Z(const UnitaryState& s, int n1, int n2) {
  if (s.U.rows() != n1 + n2 || s.U.cols() != n1 + n2) throw DomainError("block sizes do not match the unitary");
  const CMat B = s.U.topRightCorner(n1, n2);
  const CMat D = s.U.bottomRightCorner(n2, n2);
  Eigen::JacobiSVD<CMat> svd(D);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond < 1e8)) throw SingularBlock("lower-right block has condition number " + std::to_string(cond));
  // Z D = B  <=>  D^T Z^T = B^T
  CMat Zt = D.transpose().partialPivLu().solve(B.transpose());
  return {Zt.transpose(), s.t};
}

flow::VectorFieldSystem riccati_matrix_system(const BlockHamiltonian& H) {
  const int n1 = H.n1, n2 = H.n2;
  std::vector<std::string> names;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      names.push_back("ReZ" + std::to_string(i) + std::to_string(j));
      names.push_back("ImZ" + std::to_string(i) + std::to_string(j));
    }
  return flow::VectorFieldSystem::non_autonomous(
      2 * static_cast<std::size_t>(n1 * n2), "matrix-riccati",
      [H, n1, n2](double t, std::span<const double> x) {
        CMat Z = unpack(x, n1, n2);
        const CMat h1 = H.H1(t), h2 = H.H2(t), v = H.V(t);
        CMat rhs = v + h1 * Z - Z * h2 - Z * v.adjoint() * Z;
        return pack(CMat(-I * rhs));
      },
      names);
}

CosetReport verify_coset_reduction(const BlockHamiltonian& H, const UnitaryState& U0, double t0, double t1,
                                   const flow::IntegratorConfig& cfg) {
  CosetReport rep;
  UnitaryState start{U0.U, t0};
  auto run = evolve_unitary_run(H, start, t1, cfg);
  rep.unitarity_drift = run.max_drift;
  const int N = H.N();
  for (std::size_t k = 0; k < run.traj.size(); ++k) {
    try {
      rep.z_unitary.push_back(extract_Z({unpack(run.traj.states[k], N, N), run.traj.times[k]}, H.n1, H.n2).Z);
      rep.times.push_back(run.traj.times[k]);
    } catch (const SingularBlock&) {
      rep.partial = true;
      break;
    }
  }
  if (rep.times.empty()) throw SingularBlock("initial lower-right block is singular");
  rep.end_time = rep.times.back();
  if (rep.end_time == t0) return rep;
  flow::Trajectory ric;
  try {
    ric = flow::integrate(riccati_matrix_system(H), pack(rep.z_unitary.front()), t0, rep.end_time, cfg);
  } catch (const BlowUp& e) {
    rep.partial = true;
    rep.end_time = e.last_good_time();
    ric = flow::integrate(riccati_matrix_system(H), pack(rep.z_unitary.front()), t0, rep.end_time, cfg);
  }
  std::size_t kept = 0;
  for (std::size_t k = 0; k < rep.times.size() && rep.times[k] <= rep.end_time; ++k, ++kept) {
    CMat zr = unpack(ric.at(rep.times[k]), H.n1, H.n2);
    const double dev = (zr - rep.z_unitary[k]).norm();
    rep.max_dev = std::max(rep.max_dev, dev);
    rep.final_dev = dev;
    rep.z_riccati.push_back(std::move(zr));
  }
  rep.times.resize(kept);
  rep.z_unitary.resize(kept);
  return rep;
}

void write_z_csv(std::ostream& os, const std::vector<double>& times, const std::vector<CMat>& zs) {
  if (zs.empty()) return;
  os << "t";
  for (Eigen::Index i = 0; i < zs[0].rows(); ++i)
    for (Eigen::Index j = 0; j < zs[0].cols(); ++j) os << ",ReZ" << i << j << ",ImZ" << i << j;
  os << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < zs.size(); ++k) {
    os << times[k];
    for (Eigen::Index i = 0; i < zs[k].rows(); ++i)
      for (Eigen::Index j = 0; j < zs[k].cols(); ++j) os << "," << zs[k](i, j).real() << "," << zs[k](i, j).imag();
    os << "\n";
  }
}

}  // namespace geored::qriccati
