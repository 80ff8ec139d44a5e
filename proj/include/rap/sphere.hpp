// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>

#include "rap/spd_matrix.hpp"

namespace rap {

/// Dot products of unit vectors can leave [-1, 1] by rounding; clamp before
/// feeding them to acos.
inline double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

/// Point on the Euclidean unit sphere, ||coords|| = 1 within 1e-12.
struct SpherePoint {
  DenseVector coords;
};

inline SpherePoint make_sphere_point(const DenseVector& v) {
  const double n = v.norm();
  if (n == 0.0) throw DomainError("make_sphere_point: zero vector");
  return {v / n};
}

/// Tangent vector at `base`: <dir, base> = 0 within 1e-12 ||dir||.
struct TangentVector {
  SpherePoint base;
  DenseVector dir;

  double norm() const { return dir.norm(); }
};

namespace detail {
inline void require_tangent(const SpherePoint& x, const TangentVector& v, const char* who) {
  const double drift = std::abs(v.dir.dot(x.coords));
  if (drift > 1e-8 * v.dir.norm() + 1e-13)
    throw GeometryError(std::string(who) + ": vector is not tangent at the given base point");
}
}  // namespace detail

/// P_x xi = (I - x x') xi.
inline TangentVector project_tangent(const SpherePoint& x, const DenseVector& xi) {
  if (xi.size() != x.coords.size()) throw UsageError("project_tangent: dimension mismatch");
  return {x, xi - x.coords.dot(xi) * x.coords};
}

/// exp_x(v) = cos(||v||) x + sin(||v||) v/||v||; returns x in the ||v|| -> 0 limit.
inline SpherePoint exp_map(const SpherePoint& x, const TangentVector& v) {
  detail::require_tangent(x, v, "exp_map");
  const double t = v.norm();
  if (t < 1e-14) return x;
  return {std::cos(t) * x.coords + (std::sin(t) / t) * v.dir};
}

/// log_x(y) = arccos(x'y) P_x y / ||P_x y||. Undefined for antipodal points;
/// y = x maps to the zero tangent. ||log_x(y)|| is the geodesic distance.
inline TangentVector log_map(const SpherePoint& x, const SpherePoint& y) {
  if (x.coords.size() != y.coords.size()) throw UsageError("log_map: dimension mismatch");
  const double c = std::clamp(x.coords.dot(y.coords), -1.0, 1.0);
  if (c <= -1.0 + 1e-12)
    throw GeometryError("log_map: antipodal points, logarithm undefined");
  DenseVector proj = y.coords - c * x.coords;
  const double pn = proj.norm();
  if (pn < 1e-14) return {x, DenseVector::Zero(x.coords.size())};
  return {x, (clamped_acos(c) / pn) * proj};
}

inline double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  return clamped_acos(x.coords.dot(y.coords));
}

/// Transports u from T_x to T_y along the connecting geodesic (an isometry).
/// With v = log_x(y):
///   u + (cos||v|| - 1) v (v'u)/||v||^2 - sin(||v||) x (v'u)/||v||.
inline TangentVector parallel_transport(const SpherePoint& x, const SpherePoint& y,
                                        const TangentVector& u) {
  detail::require_tangent(x, u, "parallel_transport");
  const TangentVector v = log_map(x, y);  // throws on antipodal input
  const double t = v.norm();
  if (t < 1e-14) return {y, u.dir};
  const double vu = v.dir.dot(u.dir) / t;
  DenseVector w = u.dir + (std::cos(t) - 1.0) * (vu / t) * v.dir - std::sin(t) * vu * x.coords;
  return {y, w};
}

}  // namespace rap
