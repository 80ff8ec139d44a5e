// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>

#include "rap/core.hpp"
#include "rap/solvers.hpp"
#include "rap/sphere.hpp"

namespace rap {

/// Smooth objective on the unit sphere given by its ambient value and
/// Euclidean gradient; the Riemannian gradient is the tangent projection.
struct SphereObjective {
  std::function<double(const DenseVector&)> value;
  std::function<DenseVector(const DenseVector&)> euclidean_gradient;
};

/// Locally optimal x-update oracle: minimizes f over exp_y(span{g1, g2}).
using SubspaceMinimizer =
    std::function<SpherePoint(const SpherePoint& y, const TangentVector& g1,
                              const TangentVector& g2)>;

struct LoragResult {
  double f_min;
  SpherePoint x;
  ConvergenceHistory history;
};

/// Locally optimal Riemannian accelerated gradient iteration on the unit
/// sphere:
///   y_m     = exp_{x_m}( alpha/(1+alpha+beta) log_{x_m}(v_m) )
///   x_{m+1} = argmin f over exp_{y_m}(span{grad f(y_m), log_{y_m}(x_m)})
///   v_{m+1} = exp_{y_m}( (1-alpha)/(1+beta) log_{y_m}(v_m)
///                        - (alpha/gamma_bar) grad f(y_m) )
/// Function values are nonincreasing because exp_{y_m}(log_{y_m}(x_m)) = x_m
/// lies in the search set. Without a reference value the run stops when
/// ||grad f|| <= residual_tol * max(|f|, 1).
inline LoragResult lorag_solve(const SphereObjective& obj, const AccelCoefficients& coeffs,
                               const SpherePoint& x0, const SolverConfig& cfg,
                               const SubspaceMinimizer& minimize) {
  detail::validate_config(cfg);
  const detail::RunClock clock;
  const double alpha = coeffs.alpha, beta = coeffs.beta;
  const double c_y = alpha / (1.0 + alpha + beta);
  const double c_v = (1.0 - alpha) / (1.0 + beta);
  const double c_g = alpha / coeffs.gamma_bar;

  SpherePoint x = x0;
  SpherePoint v = x0;
  double f = obj.value(x.coords);

  ConvergenceHistory hist;
  hist.reference_lambda = cfg.reference_lambda;
  hist.rayleigh_values.push_back(f);
  hist.elapsed_ms.push_back(clock.ms());

  auto grad_measure = [&](const SpherePoint& at) {
    return project_tangent(at, obj.euclidean_gradient(at.coords)).norm() /
           std::max(std::abs(f), 1.0);
  };
  const bool need_residual = !cfg.reference_lambda.has_value();
  std::optional<double> res;
  if (need_residual) res = grad_measure(x);
  bool converged = stopping_check(f, cfg, res);

  int iter = 0;
  while (!converged && iter < cfg.max_iter) {
    ++iter;
    const TangentVector toward_v = log_map(x, v);
    const SpherePoint y = exp_map(x, TangentVector{x, c_y * toward_v.dir});

    const TangentVector grad_y = project_tangent(y, obj.euclidean_gradient(y.coords));
    const TangentVector toward_x = log_map(y, x);
    const SpherePoint xnew = minimize(y, grad_y, toward_x);

    const TangentVector yv = log_map(y, v);
    v = exp_map(y, TangentVector{y, c_v * yv.dir - c_g * grad_y.dir});

    x = xnew;
    f = obj.value(x.coords);
    hist.rayleigh_values.push_back(f);
    hist.elapsed_ms.push_back(clock.ms());
    if (need_residual) res = grad_measure(x);
    converged = stopping_check(f, cfg, res);
  }

  hist.iterations = iter;
  hist.converged = converged;
  hist.wall_seconds = clock.ms() / 1000.0;
  return {f, x, hist};
}

/// Rayleigh-quotient objective for a pencil.
inline SphereObjective rayleigh_objective(const MatrixPencil& p) {
  return {[&p](const DenseVector& z) { return rayleigh_quotient(p, z); },
          [&p](const DenseVector& z) { return euclidean_gradient(p, z); }};
}

/// Subspace oracle for the Rayleigh quotient: every point of
/// exp_y(span{g1, g2}) lies in span{y, g1, g2}, so the minimizer is the
/// smallest Ritz vector of that span, renormalized. Sign is chosen to stay in
/// the hemisphere of the previous iterate exp_y(g2) when g2 points at it.
inline SubspaceMinimizer make_rayleigh_ritz_minimizer(const MatrixPencil& p) {
  return [&p](const SpherePoint& y, const TangentVector& g1,
              const TangentVector& g2) -> SpherePoint {
    const SpherePoint prev = exp_map(y, g2);
    const auto rr = rayleigh_ritz({y.coords, g1.dir, g2.dir}, p);
    DenseVector z = rr.vector;
    if (z.dot(prev.coords) < 0.0) z = -z;
    return make_sphere_point(z);
  };
}

}  // namespace rap
