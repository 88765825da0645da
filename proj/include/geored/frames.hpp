// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geored::frames {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using CovectorField = std::function<Vec4(const Vec4&)>;
using VectorField4 = std::function<Vec4(const Vec4&)>;

// Minkowski metric diag(1, -1, -1, -1).
Mat4 minkowski();

struct ReferenceFrame {
  CovectorField theta;
  VectorField4 gamma;
  std::string label;

  double pairing(const Vec4& point) const { return theta(point).dot(gamma(point)); }
  // theta = dx^0, gamma = d/dx^0
  static ReferenceFrame lab();
  // Push forward by a constant linear map L: gamma -> L gamma, theta -> theta L^{-1}.
  ReferenceFrame transformed(const Mat4& L, std::string label = {}) const;
};

struct FrameTensorAtPoint {
  Mat4 R;  // R(i, j) = gamma^i theta_j
  Vec4 theta;
  Vec4 gamma;
  Vec4 point;

  double trace() const { return R.trace(); }
  double projector_residual() const { return (R * R - R).cwiseAbs().maxCoeff(); }
};

// Throws NotNormalized when |theta(gamma) - 1| > tol.
FrameTensorAtPoint frame_tensor(const ReferenceFrame& frame, const Vec4& point, double tol = 1e-10);

struct TangentSplit {
  Vec4 time_part;
  Vec4 space_part;
  double lambda = 0.0;  // time_part = lambda * gamma
  bool future_oriented = false;
};
TangentSplit split_tangent(const FrameTensorAtPoint& R, const Vec4& v);

struct Compatibility {
  double trace = 0.0;
  bool compatible = false;
  bool antiparticle_branch = false;  // trace < 0
};
Compatibility compatible(const FrameTensorAtPoint& R, const FrameTensorAtPoint& Rp);
Compatibility compatible(const ReferenceFrame& a, const ReferenceFrame& b, const Vec4& point);

// Max over points and index triples of |(theta ^ d theta)_{ijk}|, d theta by central differences.
double frobenius_residual(const CovectorField& theta, const std::vector<Vec4>& points, double h = 1e-5);

struct BoostParams {
  double rapidity = 0.0;
  std::array<double, 3> direction{1.0, 0.0, 0.0};
};
// exp(rapidity * n.K) with K_i the standard boost generators.
Mat4 boost(const BoostParams& b);
// max |L^T eta L - eta|
double lorentz_residual(const Mat4& L);

struct MetricFamilyReport {
  double residual = 0.0;          // max |eta gamma' - theta'| over the family
  double lorentz_residual = 0.0;  // max over boosts
  double inverse_residual = 0.0;  // |eta_up eta_down - 1|
};
// Throws DomainError when a boost fails the Lorentz check at 1e-12.
MetricFamilyReport metric_from_frame_family(const std::vector<BoostParams>& boosts);

}  // namespace geored::frames
