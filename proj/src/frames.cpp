// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/frames.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "geored/error.hpp"

namespace geored::frames {

Mat4 minkowski() { return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

ReferenceFrame ReferenceFrame::lab() {
  return {[](const Vec4&) { return Vec4(1.0, 0.0, 0.0, 0.0); },
          [](const Vec4&) { return Vec4(1.0, 0.0, 0.0, 0.0); }, "lab"};
}

ReferenceFrame ReferenceFrame::transformed(const Mat4& L, std::string name) const {
  const Mat4 Linv = L.inverse();
  auto th = theta;
  auto ga = gamma;
  return {[th, Linv](const Vec4& x) -> Vec4 { return Linv.transpose() * th(Linv * x); },
          [ga, L, Linv](const Vec4& x) -> Vec4 { return L * ga(Linv * x); },
          name.empty() ? label + "'" : std::move(name)};
}

FrameTensorAtPoint frame_tensor(const ReferenceFrame& frame, const Vec4& point, double tol) {
  FrameTensorAtPoint out;
  out.theta = frame.theta(point);
  out.gamma = frame.gamma(point);
  out.point = point;
  const double pair = out.theta.dot(out.gamma);
  if (std::abs(pair - 1.0) > tol) {
    throw NotNormalized("theta(gamma) = " + std::to_string(pair) + " for frame " + frame.label);
  }
  out.R = out.gamma * out.theta.transpose();
  return out;
}

TangentSplit split_tangent(const FrameTensorAtPoint& R, const Vec4& v) {
  TangentSplit s;
  s.time_part = R.R * v;
  s.space_part = v - s.time_part;
  s.lambda = R.theta.dot(v);
  s.future_oriented = s.lambda > 0.0;
  return s;
}

Compatibility compatible(const FrameTensorAtPoint& R, const FrameTensorAtPoint& Rp) {
  Compatibility c;
  c.trace = (R.R * Rp.R).trace();
  c.compatible = c.trace > 0.0;
  c.antiparticle_branch = c.trace < 0.0;
  return c;
}

Compatibility compatible(const ReferenceFrame& a, const ReferenceFrame& b, const Vec4& point) {
  return compatible(frame_tensor(a, point), frame_tensor(b, point));
}

double frobenius_residual(const CovectorField& theta, const std::vector<Vec4>& points, double h) {
  double worst = 0.0;
  for (const auto& x : points) {
    // J(i, j) = d_i theta_j
    Mat4 J;
    for (int i = 0; i < 4; ++i) {
      Vec4 xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      J.row(i) = ((theta(xp) - theta(xm)) / (2.0 * h)).transpose();
    }
    const Mat4 dth = J - J.transpose();
    const Vec4 t = theta(x);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k) {
          const double c = t(i) * dth(j, k) + t(j) * dth(k, i) + t(k) * dth(i, j);
          worst = std::max(worst, std::abs(c));
        }
  }
  return worst;
}

Mat4 boost(const BoostParams& b) {
  Eigen::Vector3d n(b.direction[0], b.direction[1], b.direction[2]);
  const double norm = n.norm();
  if (norm == 0.0) throw DomainError("boost direction must be nonzero");
  n /= norm;
  Mat4 G = Mat4::Zero();
  for (int i = 0; i < 3; ++i) {
    G(0, i + 1) = n(i);
    G(i + 1, 0) = n(i);
  }
  return (b.rapidity * G).exp();
}

double lorentz_residual(const Mat4& L) {
  const Mat4 eta = minkowski();
  return (L.transpose() * eta * L - eta).cwiseAbs().maxCoeff();
}

MetricFamilyReport metric_from_frame_family(const std::vector<BoostParams>& boosts) {
  MetricFamilyReport rep;
  const Mat4 eta = minkowski();
  const Mat4 eta_up = eta.inverse();
  rep.inverse_residual = (eta_up * eta - Mat4::Identity()).cwiseAbs().maxCoeff();
  const auto lab = ReferenceFrame::lab();
  const Vec4 origin = Vec4::Zero();
  for (const auto& b : boosts) {
    const Mat4 L = boost(b);
    const double lr = lorentz_residual(L);
    if (lr > 1e-12 * std::max(1.0, L.squaredNorm())) {
      throw DomainError("boost with rapidity " + std::to_string(b.rapidity) + " is not a Lorentz map");
    }
    rep.lorentz_residual = std::max(rep.lorentz_residual, lr);
    const auto f = lab.transformed(L);
    const Vec4 g = f.gamma(origin);
    const Vec4 a = f.theta(origin);
    rep.residual = std::max(rep.residual, (eta * g - a).cwiseAbs().maxCoeff());
    rep.residual = std::max(rep.residual, (eta_up * a - g).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace geored::frames
