// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "rap/sphere.hpp"
#include "rap/spd_matrix.hpp"

namespace rap {

/// Point on the B-sphere stored as (x, xhat) with xhat = Bx maintained by
/// construction. Every B-metric quantity is an ordinary inner product of one
/// iterate and one co-iterate, so B itself is never applied.
struct PairedVector {
  DenseVector x;
  DenseVector xhat;

  Index size() const { return x.size(); }
};

/// Symmetrized B-inner product (u'vhat + v'uhat)/2. The average halves the
/// rounding asymmetry between the two algebraically equal forms.
inline double paired_inner(const PairedVector& u, const PairedVector& v) {
  return 0.5 * (u.x.dot(v.xhat) + v.x.dot(u.xhat));
}

/// <x, xhat> = ||x||_B^2.
inline double paired_norm_sq(const PairedVector& u) { return u.x.dot(u.xhat); }

/// Divides both components by sqrt(<x, xhat>). A nonpositive inner product
/// means the co-iterate no longer represents an SPD metric.
inline PairedVector paired_normalize(PairedVector p) {
  const double s = paired_norm_sq(p);
  if (!(s > 0.0))
    throw BreakdownError("paired_normalize: <x, xhat> <= 0, SPD consistency lost", s, -1);
  const double inv = 1.0 / std::sqrt(s);
  p.x *= inv;
  p.xhat *= inv;
  return p;
}

/// Geodesic step on the B-sphere: cos/sin combination applied identically to
/// the iterate and the co-iterate. `dir` must be B-orthonormal against `base`
/// (<dir.x, base.xhat> = 0 and <dir.x, dir.xhat> = 1, both within 1e-8).
inline PairedVector paired_geodesic_step(const PairedVector& base, const PairedVector& dir,
                                         double angle) {
  if (base.size() != dir.size()) throw UsageError("paired_geodesic_step: dimension mismatch");
  if (std::abs(paired_inner(base, dir)) > 1e-8)
    throw GeometryError("paired_geodesic_step: direction not B-orthogonal to base");
  if (std::abs(paired_norm_sq(dir) - 1.0) > 1e-8)
    throw GeometryError("paired_geodesic_step: direction not B-normalized");
  const double c = std::cos(angle), s = std::sin(angle);
  PairedVector out{c * base.x + s * dir.x, c * base.xhat + s * dir.xhat};
  return paired_normalize(out);
}

}  // namespace rap
