// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <random>

#include "rap/core.hpp"
#include "rap/spd_matrix.hpp"

namespace testutil {

using rap::DenseVector;
using rap::Index;

inline DenseVector random_vector(std::mt19937& rng, Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937& rng, Index n) {
  Eigen::MatrixXd g(n, n);
  for (Index i = 0; i < n; ++i) g.row(i) = random_vector(rng, n).transpose();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ();
}

/// Dense SPD matrix with prescribed eigenvalue range.
inline Eigen::MatrixXd random_spd_dense(std::mt19937& rng, Index n, double lo, double hi) {
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  std::uniform_real_distribution<double> unif(lo, hi);
  Eigen::VectorXd d(n);
  for (Index i = 0; i < n; ++i) d[i] = unif(rng);
  d[0] = lo;
  d[n - 1] = hi;
  const Eigen::MatrixXd m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());  // exactly symmetric
}

inline rap::SpdMatrix random_spd(std::mt19937& rng, Index n, double lo = 1.0, double hi = 10.0) {
  return rap::SpdMatrix::from_dense(random_spd_dense(rng, n, lo, hi));
}

inline rap::MatrixPencil random_pencil(std::mt19937& rng, Index n) {
  return {random_spd(rng, n, 1.0, 10.0), random_spd(rng, n, 0.5, 2.0)};
}

/// Central finite difference of f along d at x.
template <typename F>
double fd_directional(const F& f, const DenseVector& x, const DenseVector& d, double step) {
  return (f(x + step * d) - f(x - step * d)) / (2.0 * step);
}

/// Brute-force minimum of the Rayleigh quotient over the span of three basis
/// vectors: zoomed grid search over spherical coordinates of the coefficient
/// vector. Uses only the 3x3 Gram matrices, independent of the library's
/// Rayleigh-Ritz path.
inline double grid_search_span_min(const rap::MatrixPencil& p,
                                   const std::vector<DenseVector>& basis) {
  const Index k = static_cast<Index>(basis.size());
  Eigen::MatrixXd ga(k, k), gm(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      ga(i, j) = basis[static_cast<std::size_t>(i)].dot(p.a * basis[static_cast<std::size_t>(j)]);
      gm(i, j) = basis[static_cast<std::size_t>(i)].dot(p.m * basis[static_cast<std::size_t>(j)]);
    }
  auto value = [&](double theta, double phi) {
    Eigen::Vector3d c(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                      std::cos(theta));
    const double den = c.dot(gm * c);
    if (den <= 1e-14) return std::numeric_limits<double>::infinity();
    return c.dot(ga * c) / den;
  };

  double best = std::numeric_limits<double>::infinity();
  double bt = 0.0, bp = 0.0;
  for (int i = 0; i <= 60; ++i)
    for (int j = 0; j <= 120; ++j) {
      const double t = M_PI * i / 60.0, f = 2.0 * M_PI * j / 120.0;
      const double v = value(t, f);
      if (v < best) {
        best = v;
        bt = t;
        bp = f;
      }
    }
  double span_t = M_PI / 60.0, span_p = 2.0 * M_PI / 120.0;
  for (int level = 0; level < 5; ++level) {
    const double t0 = bt, p0 = bp;
    for (int i = -20; i <= 20; ++i)
      for (int j = -20; j <= 20; ++j) {
        const double t = t0 + span_t * i / 20.0, f = p0 + span_p * j / 20.0;
        const double v = value(t, f);
        if (v < best) {
          best = v;
          bt = t;
          bp = f;
        }
      }
    span_t /= 10.0;
    span_p /= 10.0;
  }
  return best;
}

/// Geodesic finite-difference quadratic form of a sphere function:
/// q(v) ~ <v, Hess f(x)[v]> for tangent v at unit x.
template <typename F>
double fd_geodesic_hessian(const F& f, const DenseVector& x, const DenseVector& v, double t) {
  const double vn = v.norm();
  const DenseVector dir = v / vn;
  auto at = [&](double s) {
    return f(std::cos(s) * x + std::sin(s) * dir);
  };
  const double q_unit = (at(t) - 2.0 * at(0.0) + at(-t)) / (t * t);
  return q_unit * vn * vn;
}

}  // namespace testutil
