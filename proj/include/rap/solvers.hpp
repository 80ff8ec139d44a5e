// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>

#include "rap/core.hpp"
#include "rap/paired.hpp"
#include "rap/preconditioner.hpp"
#include "rap/sphere.hpp"

namespace rap {

/// Accelerated-gradient coefficients. The closed form
///   beta = 3/(2 sqrt(kappa) - 4),
///   alpha = (sqrt(beta^2 + 4 (1+beta)/kappa) - beta)/2,
///   gamma = alpha mu / (alpha + beta),  gamma_bar = (1+beta) gamma
/// is valid for kappa = ell/mu >= 9 and gives alpha >= 1/(2 sqrt(kappa)).
struct AccelCoefficients {
  double mu;
  double ell;
  double kappa;
  double alpha;
  double beta;
  double gamma;
  double gamma_bar;
};

inline AccelCoefficients compute_coefficients(double mu, double ell) {
  if (!(mu > 0.0) || !(ell > 0.0) || !(std::isfinite(mu) && std::isfinite(ell)))
    throw CoefficientError("compute_coefficients: need 0 < mu <= ell");
  const double kappa = ell / mu;
  if (kappa < 9.0)
    throw CoefficientError("compute_coefficients: closed form requires ell/mu >= 9");
  const double beta = 3.0 / (2.0 * std::sqrt(kappa) - 4.0);
  const double alpha = (std::sqrt(beta * beta + 4.0 * (1.0 + beta) / kappa) - beta) / 2.0;
  const double gamma = alpha * mu / (alpha + beta);
  return {mu, ell, kappa, alpha, beta, gamma, (1.0 + beta) * gamma};
}

struct SolverConfig {
  double tol = 1e-10;                       // relative eigenvalue tolerance
  int max_iter = 20000;
  std::optional<double> reference_lambda;   // known discrete eigenvalue, if any
  bool record_residuals = false;
  double residual_tol = 1e-8;               // fallback criterion when no reference
  bool literal_log_momentum = false;        // use the log-map momentum weight
};

struct ConvergenceHistory {
  std::vector<double> rayleigh_values;   // rho_0, rho_1, ...
  std::vector<double> residual_norms;    // ||Ax - rho Mx||, empty unless recorded
  std::vector<double> elapsed_ms;        // cumulative, aligned with rayleigh_values
  std::optional<double> reference_lambda;
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;

  void write_csv(std::ostream& out) const {
    out << "iter,rayleigh,gap,residual,elapsed_ms\n";
    char buf[64];
    for (std::size_t i = 0; i < rayleigh_values.size(); ++i) {
      out << i << ",";
      std::snprintf(buf, sizeof(buf), "%.12e", rayleigh_values[i]);
      out << buf << ",";
      if (reference_lambda) {
        std::snprintf(buf, sizeof(buf), "%.12e", rayleigh_values[i] - *reference_lambda);
        out << buf;
      }
      out << ",";
      if (i < residual_norms.size()) {
        std::snprintf(buf, sizeof(buf), "%.12e", residual_norms[i]);
        out << buf;
      }
      out << ",";
      std::snprintf(buf, sizeof(buf), "%.3f", i < elapsed_ms.size() ? elapsed_ms[i] : 0.0);
      out << buf << "\n";
    }
  }
};

/// Convergence test. With a reference eigenvalue: rho - lambda_ref <=
/// tol * lambda_ref. Otherwise the residual surrogate ||Ax - rho Mx||_{M^-1}
/// / ||x||_M <= residual_tol * rho decides, and without either the run only
/// stops at max_iter.
inline bool stopping_check(double rho, const SolverConfig& cfg,
                           std::optional<double> residual_measure = {}) {
  if (cfg.reference_lambda)
    return rho - *cfg.reference_lambda <= cfg.tol * (*cfg.reference_lambda);
  if (residual_measure) return *residual_measure <= cfg.residual_tol * rho;
  return false;
}

/// Per-iteration state handed to observers: current iterate x, momentum
/// carrier v, probe point y (all B-normalized pairs), Euclidean gradient ghat
/// at y and its preconditioned image g.
struct IterateState {
  const PairedVector& x;
  const PairedVector& v;
  const PairedVector& y;
  const DenseVector& ghat;
  const DenseVector& g;
  int iteration;
};

using IterateObserver = std::function<void(const IterateState&)>;

struct SolveResult {
  double lambda;
  PairedVector x;
  ConvergenceHistory history;
};

/// Breakdown that carries the last B-normalized iterate.
class SolverBreakdown : public BreakdownError {
public:
  SolverBreakdown(const std::string& what, double rho, int iter, PairedVector last)
      : BreakdownError(what, rho, iter), last_(std::make_shared<PairedVector>(std::move(last))) {}
  const PairedVector& last_iterate() const { return *last_; }

private:
  std::shared_ptr<PairedVector> last_;
};

namespace detail {

/// One locally optimal subspace step for the iterative solvers. The basis
/// columns are orthonormalized by pivoted Gram-Schmidt and the identical
/// elementary operations are applied to the attached co-iterate and product
/// columns, so every output is a well-conditioned combination of
/// near-orthonormal vectors; no triangular back-substitution appears. This
/// keeps the Ritz value above lambda_1 and the co-iterate consistent even
/// when the basis is close to dependent.
struct LocalRitz {
  double value;
  DenseVector x;
  DenseVector xhat;  // empty when no co-iterates were supplied
  DenseVector ax;
  DenseVector mx;
  int kept;
};

inline LocalRitz local_ritz_step(const MatrixPencil& p, std::vector<DenseVector> v,
                                 std::vector<DenseVector> vhat, std::vector<DenseVector> av,
                                 std::vector<DenseVector> mv, double drop_tol = 1e-12) {
  const std::size_t k = v.size();
  const bool with_hats = !vhat.empty();
  // Columns enter at unit length so the drop test measures angles, not sizes.
  std::vector<char> used(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    const double nj = v[j].norm();
    if (nj == 0.0) {
      used[j] = 1;
      continue;
    }
    const double inv = 1.0 / nj;
    v[j] *= inv;
    if (with_hats) vhat[j] *= inv;
    av[j] *= inv;
    mv[j] *= inv;
  }

  // A column whose residual after orthogonalization is this small has its
  // carried products amplified past what the stopping tolerance can absorb;
  // recompute them by true matvecs instead.
  const double refresh_frac = 2e-2;
  std::vector<std::size_t> order;
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t pivot = k;
    double best = drop_tol;
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      const double nj = v[j].norm();
      if (nj > best) {
        best = nj;
        pivot = j;
      }
    }
    if (pivot == k) break;
    used[pivot] = 1;
    // Second orthogonalization pass of the pivot keeps Q orthonormal to
    // rounding even when the basis is nearly dependent.
    for (std::size_t i : order) {
      const double proj = v[i].dot(v[pivot]);
      v[pivot] -= proj * v[i];
      if (with_hats) vhat[pivot] -= proj * vhat[i];
      av[pivot] -= proj * av[i];
      mv[pivot] -= proj * mv[i];
    }
    const double nrm = v[pivot].norm();
    if (!(nrm > drop_tol)) continue;
    const double inv = 1.0 / nrm;
    v[pivot] *= inv;
    if (with_hats) vhat[pivot] *= inv;
    if (nrm < refresh_frac) {
      av[pivot] = p.a * v[pivot];
      mv[pivot] = p.m * v[pivot];
    } else {
      av[pivot] *= inv;
      mv[pivot] *= inv;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      const double proj = v[pivot].dot(v[j]);
      v[j] -= proj * v[pivot];
      if (with_hats) vhat[j] -= proj * vhat[pivot];
      av[j] -= proj * av[pivot];
      mv[j] -= proj * mv[pivot];
    }
    order.push_back(pivot);
  }
  const std::size_t r = order.size();
  if (r == 0) throw DegenerateBasisError("local_ritz_step: basis is numerically zero");

  Eigen::MatrixXd ar(r, r), mr(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      ar(static_cast<Index>(i), static_cast<Index>(j)) = v[order[i]].dot(av[order[j]]);
      mr(static_cast<Index>(i), static_cast<Index>(j)) = v[order[i]].dot(mv[order[j]]);
    }
  ar = 0.5 * (ar + ar.transpose()).eval();
  mr = 0.5 * (mr + mr.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ar, mr);
  if (es.info() != Eigen::Success)
    throw MatrixError("local_ritz_step: reduced eigenproblem failed");
  const DenseVector c = es.eigenvectors().col(0);

  LocalRitz out;
  out.value = es.eigenvalues()(0);
  out.kept = static_cast<int>(r);
  const Index n = v[order[0]].size();
  out.x = DenseVector::Zero(n);
  out.ax = DenseVector::Zero(n);
  out.mx = DenseVector::Zero(n);
  if (with_hats) out.xhat = DenseVector::Zero(n);
  for (std::size_t i = 0; i < r; ++i) {
    out.x += c[static_cast<Index>(i)] * v[order[i]];
    out.ax += c[static_cast<Index>(i)] * av[order[i]];
    out.mx += c[static_cast<Index>(i)] * mv[order[i]];
    if (with_hats) out.xhat += c[static_cast<Index>(i)] * vhat[order[i]];
  }
  return out;
}

class RunClock {
public:
  RunClock() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point t0_;
};

/// Lazily factored mass matrix for the residual stopping surrogate.
class MassSolver {
public:
  explicit MassSolver(const SpdMatrix& m) : m_(&m) {}
  double residual_measure(const DenseVector& r, double xmx) {
    if (!llt_) {
      llt_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
      llt_->compute(m_->to_eigen());
      if (llt_->info() != Eigen::Success)
        throw MatrixError("residual check: mass matrix not SPD");
    }
    const DenseVector mi = llt_->solve(r);
    return std::sqrt(std::max(r.dot(mi), 0.0)) / std::sqrt(xmx);
  }

private:
  const SpdMatrix* m_;
  std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
};

inline void validate_config(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw UsageError("solver config: tol must be positive");
  if (cfg.max_iter < 1) throw UsageError("solver config: max_iter must be >= 1");
}

}  // namespace detail

/// Riemannian acceleration with preconditioning. Minimizes the Rayleigh
/// quotient of (A, M) over the B-sphere, where B is given by its inverse
/// action `pc`. Iterates and co-iterates are advanced together so B is never
/// multiplied. Each iteration does one preconditioner solve.
///
/// The loop has three phases: a probe point y on the geodesic from x toward
/// the momentum carrier v, a momentum update for v combining the transported
/// v-direction with the preconditioned gradient, and a locally optimal x
/// update by Rayleigh-Ritz over span{x, y, g}. When v is numerically
/// B-parallel to x (always at the first step) the momentum term is dropped:
/// gradient-only v-step and a two-vector Rayleigh-Ritz over {x, g}.
inline SolveResult rap_solve(const MatrixPencil& p, const PreconditionerHandle& pc,
                             const AccelCoefficients& coeffs, const DenseVector& x0hat,
                             const SolverConfig& cfg = {}, const IterateObserver& observer = {}) {
  const Index n = p.dim();
  if (pc.dim() != n || x0hat.size() != n) throw UsageError("rap_solve: dimension mismatch");
  if (x0hat.squaredNorm() == 0.0) throw DomainError("rap_solve: zero initial vector");
  detail::validate_config(cfg);

  const detail::RunClock clock;
  const double alpha = coeffs.alpha, beta = coeffs.beta;
  const double c_theta = alpha / (alpha + beta + 1.0);
  const double c_mom = (1.0 - alpha) / alpha;
  const double c_grad = alpha / ((1.0 + beta) * coeffs.gamma);

  PairedVector x{pc.apply(x0hat), x0hat};
  x = paired_normalize(x);
  PairedVector v = x;
  PairedVector y = x;

  DenseVector ax = p.a * x.x, mx = p.m * x.x;
  double rho = x.x.dot(ax) / x.x.dot(mx);

  ConvergenceHistory hist;
  hist.reference_lambda = cfg.reference_lambda;
  detail::MassSolver mass(p.m);
  const bool need_residual = !cfg.reference_lambda.has_value();

  auto record = [&](double rr, const DenseVector& resid, bool have_resid) {
    hist.rayleigh_values.push_back(rr);
    if (cfg.record_residuals) hist.residual_norms.push_back(have_resid ? resid.norm() : 0.0);
    hist.elapsed_ms.push_back(clock.ms());
  };

  DenseVector r0 = ax - rho * mx;
  record(rho, r0, true);
  std::optional<double> res_measure;
  if (need_residual) res_measure = mass.residual_measure(r0, x.x.dot(mx));
  bool converged = stopping_check(rho, cfg, res_measure);

  int iter = 0;
  while (!converged && iter < cfg.max_iter) {
    ++iter;

    // y-update: rotate x toward v by the damped B-angle between them.
    const double exv = paired_inner(x, v);
    PairedVector w{v.x - exv * x.x, v.xhat - exv * x.xhat};
    const bool degenerate = w.x.norm() < 1e-14 * v.x.norm();
    double theta = 0.0;
    DenseVector ay, my;
    if (!degenerate) {
      theta = c_theta * clamped_acos(exv);
      try {
        w = paired_normalize(w);
      } catch (const BreakdownError& e) {
        throw SolverBreakdown("rap_solve: B-norm of the momentum complement is not positive",
                              rho, iter, x);
      }
      const double ct = std::cos(theta), st = std::sin(theta);
      y = {ct * x.x + st * w.x, ct * x.xhat + st * w.xhat};
      ay = p.a * y.x;
      my = p.m * y.x;
    } else {
      y = x;
      ay = ax;
      my = mx;
    }

    // v-update: transported momentum direction plus preconditioned gradient.
    const double ymy = y.x.dot(my);
    const double sigma = y.x.dot(ay) / ymy;
    const DenseVector ghat = (2.0 / ymy) * (ay - sigma * my);
    const DenseVector g = pc.apply(ghat);

    double mom = 0.0;
    PairedVector pdir{DenseVector::Zero(n), DenseVector::Zero(n)};
    if (!degenerate) {
      const double eyv = paired_inner(y, v);
      PairedVector pv{v.x - eyv * y.x, v.xhat - eyv * y.xhat};
      const double pn2 = paired_norm_sq(pv);
      if (pv.x.norm() >= 1e-14 * v.x.norm() && pn2 > 0.0) {
        const double inv = 1.0 / std::sqrt(pn2);
        pdir = {inv * pv.x, inv * pv.xhat};
        mom = cfg.literal_log_momentum
                  ? ((1.0 - alpha) / (1.0 + beta)) * clamped_acos(eyv)
                  : c_mom * theta;
      }
    }
    const PairedVector q{mom * pdir.x - c_grad * g, mom * pdir.xhat - c_grad * ghat};
    const double qn2 = paired_norm_sq(q);
    if (qn2 > 0.0) {
      const double etaq = std::sqrt(qn2);
      const double cq = std::cos(etaq), sq = std::sin(etaq) / etaq;
      v = {cq * y.x + sq * q.x, cq * y.xhat + sq * q.xhat};
    } else if (q.x.norm() > 1e-13 * c_grad * g.norm()) {
      throw SolverBreakdown("rap_solve: momentum step has nonpositive B-norm", rho, iter, x);
    } else {
      v = y;
    }

    // x-update: locally optimal Rayleigh-Ritz over {x, y, g} ({x, g} in the
    // degenerate branch); the co-iterate is carried through the same
    // combination.
    const DenseVector ag = p.a * g, mg = p.m * g;
    detail::LocalRitz rb =
        degenerate
            ? detail::local_ritz_step(p, {x.x, g}, {x.xhat, ghat}, {ax, ag}, {mx, mg})
            : detail::local_ritz_step(p, {x.x, y.x, g}, {x.xhat, y.xhat, ghat},
                                      {ax, ay, ag}, {mx, my, mg});
    // Keep iterates in one hemisphere of the B-sphere.
    if (rb.x.dot(x.xhat) < 0.0) {
      rb.x = -rb.x;
      rb.xhat = -rb.xhat;
      rb.ax = -rb.ax;
      rb.mx = -rb.mx;
    }
    const double nrm2 = rb.x.dot(rb.xhat);
    if (!(nrm2 > 0.0))
      throw SolverBreakdown("rap_solve: <x, xhat> <= 0 after update", rho, iter, x);
    const double inv = 1.0 / std::sqrt(nrm2);
    x = {inv * rb.x, inv * rb.xhat};
    if (iter % 32 == 0) {
      ax = p.a * x.x;
      mx = p.m * x.x;
    } else {
      ax = inv * rb.ax;
      mx = inv * rb.mx;
    }
    rho = x.x.dot(ax) / x.x.dot(mx);

    DenseVector resid;
    const bool want_resid = cfg.record_residuals || need_residual;
    if (want_resid) resid = ax - rho * mx;
    record(rho, resid, want_resid);
    if (need_residual) res_measure = mass.residual_measure(resid, x.x.dot(mx));
    if (observer) observer(IterateState{x, v, y, ghat, g, iter});
    converged = stopping_check(rho, cfg, res_measure);
  }

  hist.iterations = iter;
  hist.converged = converged;
  hist.wall_seconds = clock.ms() / 1000.0;
  return {rho, x, hist};
}

/// Preconditioned steepest descent: x_{m+1} minimizes the Rayleigh quotient
/// over span{x_m, B^{-1}(A x_m - rho M x_m)}. Same calling convention as
/// rap_solve; one preconditioner solve per iteration.
inline SolveResult psd_solve(const MatrixPencil& p, const PreconditionerHandle& pc,
                             const DenseVector& x0hat, const SolverConfig& cfg = {}) {
  const Index n = p.dim();
  if (pc.dim() != n || x0hat.size() != n) throw UsageError("psd_solve: dimension mismatch");
  if (x0hat.squaredNorm() == 0.0) throw DomainError("psd_solve: zero initial vector");
  detail::validate_config(cfg);

  const detail::RunClock clock;
  DenseVector x = pc.apply(x0hat);
  if (x.squaredNorm() == 0.0) throw DomainError("psd_solve: preconditioner returned zero");
  x /= x.norm();

  DenseVector ax = p.a * x, mx = p.m * x;
  double rho = x.dot(ax) / x.dot(mx);

  ConvergenceHistory hist;
  hist.reference_lambda = cfg.reference_lambda;
  detail::MassSolver mass(p.m);
  const bool need_residual = !cfg.reference_lambda.has_value();

  auto record = [&](double rr, const DenseVector& resid, bool have) {
    hist.rayleigh_values.push_back(rr);
    if (cfg.record_residuals) hist.residual_norms.push_back(have ? resid.norm() : 0.0);
    hist.elapsed_ms.push_back(clock.ms());
  };

  DenseVector resid = ax - rho * mx;
  record(rho, resid, true);
  std::optional<double> res_measure;
  if (need_residual) res_measure = mass.residual_measure(resid, x.dot(mx));
  bool converged = stopping_check(rho, cfg, res_measure);

  int iter = 0;
  while (!converged && iter < cfg.max_iter) {
    ++iter;
    const DenseVector r = ax - rho * mx;
    const DenseVector g = pc.apply(r);
    const DenseVector ag = p.a * g, mg = p.m * g;
    detail::LocalRitz rb = detail::local_ritz_step(p, {x, g}, {}, {ax, ag}, {mx, mg});
    if (rb.x.dot(x) < 0.0) {
      rb.x = -rb.x;
      rb.ax = -rb.ax;
      rb.mx = -rb.mx;
    }
    const double s = rb.x.norm();
    if (!(s > 0.0)) throw BreakdownError("psd_solve: zero Ritz vector", rho, iter);
    x = rb.x / s;
    if (iter % 32 == 0) {
      ax = p.a * x;
      mx = p.m * x;
    } else {
      ax = rb.ax / s;
      mx = rb.mx / s;
    }
    rho = x.dot(ax) / x.dot(mx);

    DenseVector rr;
    const bool want = cfg.record_residuals || need_residual;
    if (want) rr = ax - rho * mx;
    record(rho, rr, want);
    if (need_residual) res_measure = mass.residual_measure(rr, x.dot(mx));
    converged = stopping_check(rho, cfg, res_measure);
  }

  hist.iterations = iter;
  hist.converged = converged;
  hist.wall_seconds = clock.ms() / 1000.0;
  const DenseVector xhat = p.m * x;  // report on the M-sphere pairing
  return {rho, PairedVector{x, xhat}, hist};
}

/// Default (mu, L) policy when nothing better is known:
///   mu = 2 (lambda2 - lambda1) nu_min / sigma,   L = 2 nu_max,
/// with nu estimates from a short pencil Lanczos on (A, B), lambda estimates
/// from the coarse pencil when available (otherwise a short Lanczos on
/// (A, M)), and sigma the (A, B)-Rayleigh quotient of the initial pair.
/// The ratio is floored so that ell/mu >= 9.
struct MuEllEstimate {
  double mu;
  double ell;
  double lambda1_est;
  double lambda2_est;
  double nu_min_est;
  double nu_max_est;
  double sigma_est;
  bool floored;
};

inline MuEllEstimate estimate_mu_ell(const MatrixPencil& p, const PreconditionerHandle& pc,
                                     const PairedVector& x0,
                                     const MatrixPencil* coarse = nullptr,
                                     bool b_equals_m = false) {
  const Index n = p.dim();
  const int nu_iters = static_cast<int>(std::min<Index>(10, n));
  auto nu = extremal_pencil_eigs([&p](const DenseVector& v) { return p.a * v; },
                                 [&pc](const DenseVector& r) { return pc.apply(r); }, n,
                                 nu_iters);

  double l1 = 0.0, l2 = 0.0;
  bool have_lambda = false;
  if (coarse && coarse->dim() >= 2) {
    const auto eig = dense_generalized_eig(*coarse);
    l1 = eig.values[0];
    l2 = eig.values[1];
    have_lambda = true;
  } else if (n >= 2) {
    auto mass = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
    mass->compute(p.m.to_eigen());
    if (mass->info() != Eigen::Success) throw MatrixError("estimate_mu_ell: M not SPD");
    const auto lr = pencil_lanczos([&p](const DenseVector& v) { return p.a * v; },
                                   [mass](const DenseVector& r) -> DenseVector {
                                     return mass->solve(r);
                                   },
                                   n, static_cast<int>(std::min<Index>(40, n)));
    if (lr.ritz_values.size() >= 2) {
      l1 = lr.ritz_values[0];
      l2 = lr.ritz_values[1];
      have_lambda = true;
    }
  }

  // With B = M the pencils (A, B) and (A, M) coincide, so the lambda
  // estimate is also a nu_min estimate; the short Lanczos resolves the top of
  // an ill-conditioned pencil much faster than the bottom, so take the
  // tighter of the two.
  if (b_equals_m && have_lambda) nu.nu_min = std::min(nu.nu_min, l1);

  const double sigma = x0.x.dot(p.a * x0.x) / paired_norm_sq(x0);
  MuEllEstimate est;
  est.lambda1_est = l1;
  est.lambda2_est = l2;
  est.nu_min_est = nu.nu_min;
  est.nu_max_est = nu.nu_max;
  est.sigma_est = sigma;
  est.ell = 2.0 * nu.nu_max;
  est.mu = have_lambda ? 2.0 * (l2 - l1) * nu.nu_min / sigma : 0.0;
  est.floored = false;
  // The convexity estimate mu is the trustworthy scale; the crude smoothness
  // estimate 2 nu_max misses a lambda/sigma factor for strong
  // preconditioners. Enforce the ratio by lifting ell, never by shrinking mu.
  if (!(est.mu > 0.0)) {
    est.mu = est.ell / 9.0;
    est.floored = true;
  } else if (est.ell / est.mu < 9.0) {
    est.ell = 9.0 * est.mu;
    est.floored = true;
  }
  return est;
}

/// Riemannian acceleration without preconditioning: RAP run on the M-sphere,
/// i.e. B = M with the mass matrix applied exactly through its factorization.
inline SolveResult ra_solve(const MatrixPencil& p, const DenseVector& x0,
                            const SolverConfig& cfg = {},
                            std::optional<AccelCoefficients> coeffs = {},
                            const MatrixPencil* coarse = nullptr) {
  const PreconditionerHandle minv = exact_inverse_preconditioner(p.m);
  const DenseVector xhat0 = p.m * x0;
  AccelCoefficients c{};
  if (coeffs) {
    c = *coeffs;
  } else {
    const auto est = estimate_mu_ell(p, minv, PairedVector{x0, xhat0}, coarse, true);
    c = compute_coefficients(est.mu, est.ell);
  }
  return rap_solve(p, minv, c, xhat0, cfg);
}

/// Steepest descent without preconditioning: PSD on the M-sphere (B = M).
inline SolveResult sd_solve(const MatrixPencil& p, const DenseVector& x0,
                            const SolverConfig& cfg = {}) {
  const PreconditionerHandle minv = exact_inverse_preconditioner(p.m);
  return psd_solve(p, minv, p.m * x0, cfg);
}

}  // namespace rap
