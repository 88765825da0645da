// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "geored/flow.hpp"
#include "geored/random.hpp"

namespace geored::qriccati {

using CMat = Eigen::MatrixXcd;

struct BlockHamiltonian {
  int n1 = 1;
  int n2 = 1;
  std::function<CMat(double)> H1;
  std::function<CMat(double)> H2;
  std::function<CMat(double)> V;

  int N() const { return n1 + n2; }
  // Full N x N matrix [[H1, V], [V^dagger, H2]]; throws DomainError when a
  // diagonal block is not Hermitian to 1e-12.
  CMat assembled(double t) const;

  static BlockHamiltonian constant(const CMat& H1, const CMat& H2, const CMat& V);
  // Random Hermitian blocks with spectral norm of the assembled matrix <= bound.
  static BlockHamiltonian random(int n1, int n2, Rng& rng, double bound);
};

struct UnitaryState {
  CMat U;
  double t = 0.0;
};

struct CosetPoint {
  CMat Z;
  double t = 0.0;
};

// Frobenius norm of U^dagger U - 1.
double unitarity_drift(const CMat& U);
// Unitary polar factor by Newton iteration U <- (U + U^{-dagger}) / 2.
CMat polar_unitary(const CMat& U);

flow::State pack(const CMat& M);
CMat unpack(std::span<const double> x, int rows, int cols);

struct UnitaryRun {
  flow::Trajectory traj;  // interleaved (Re, Im) entries of U, row-major
  double max_drift = 0.0;  // after re-projection
  int reprojections = 0;
  UnitaryState at_end(int N) const;
};

// Solves i U' = H(t) U with polar re-projection whenever the drift exceeds 1e-12.
UnitaryRun evolve_unitary_run(const BlockHamiltonian& H, const UnitaryState& U0, double t1,
                              const flow::IntegratorConfig& cfg = {});
UnitaryState evolve_unitary(const BlockHamiltonian& H, const UnitaryState& U0, double t1,
                            const flow::IntegratorConfig& cfg = {});

// Z = B D^{-1} from the upper-right and lower-right blocks of U.
CosetPoint extract_Z(const UnitaryState& U, int n1, int n2);

// i Z' = V + H1 Z - Z H2 - Z V^dagger Z on interleaved real coordinates.
flow::VectorFieldSystem riccati_matrix_system(const BlockHamiltonian& H);

struct CosetReport {
  double max_dev = 0.0;      // max Frobenius deviation over the unitary nodes
  double final_dev = 0.0;    // deviation at the last compared time
  double unitarity_drift = 0.0;
  double end_time = 0.0;
  bool partial = false;      // a singular block or blow-up ended the run early
  std::vector<double> times;
  std::vector<CMat> z_unitary;
  std::vector<CMat> z_riccati;
};

CosetReport verify_coset_reduction(const BlockHamiltonian& H, const UnitaryState& U0, double t0, double t1,
                                   const flow::IntegratorConfig& cfg = {});

// Columns t, then Re Z_ij, Im Z_ij in row-major ij order.
void write_z_csv(std::ostream& os, const std::vector<double>& times, const std::vector<CMat>& zs);

}  // namespace geored::qriccati
