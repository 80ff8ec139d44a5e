// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "rap/spd_matrix.hpp"

namespace rap {

/// f(x) = (x'Ax)/(x'Mx). Scale invariant: f(ax) = f(x) for a != 0.
inline double rayleigh_quotient(const MatrixPencil& p, const DenseVector& x) {
  if (x.size() != p.dim()) throw UsageError("rayleigh_quotient: dimension mismatch");
  if (x.squaredNorm() == 0.0) throw DomainError("rayleigh_quotient: zero vector");
  const DenseVector ax = p.a * x;
  const DenseVector mx = p.m * x;
  return x.dot(ax) / x.dot(mx);
}

/// grad f(x) = (2/(x'Mx)) (Ax - f(x) Mx). Orthogonal to x and homogeneous of
/// degree -1: grad f(2x) = grad f(x)/2.
inline DenseVector euclidean_gradient(const MatrixPencil& p, const DenseVector& x) {
  if (x.size() != p.dim()) throw UsageError("euclidean_gradient: dimension mismatch");
  if (x.squaredNorm() == 0.0) throw DomainError("euclidean_gradient: zero vector");
  const DenseVector ax = p.a * x;
  const DenseVector mx = p.m * x;
  const double xmx = x.dot(mx);
  const double f = x.dot(ax) / xmx;
  return (2.0 / xmx) * (ax - f * mx);
}

inline double weighted_inner(const DenseVector& x, const DenseVector& y) {
  if (x.size() != y.size()) throw UsageError("weighted_inner: dimension mismatch");
  return x.dot(y);
}

inline double weighted_inner(const DenseVector& x, const DenseVector& y, const SpdMatrix& w) {
  if (x.size() != y.size() || x.size() != w.rows())
    throw UsageError("weighted_inner: dimension mismatch");
  return x.dot(w * y);
}

namespace detail {

/// Smallest Ritz pair of (A, M) restricted to the column span of V, given the
/// precomputed products AV and MV. Near-dependent columns are dropped by a
/// pivoted Gram-Schmidt with tolerance `drop_tol` relative to the largest
/// column norm. Coefficients are reported in the original basis ordering,
/// zeros for dropped columns.
struct RitzInBasis {
  double value;
  DenseVector coeffs;
  int kept;
};

inline RitzInBasis ritz_in_basis(const Eigen::MatrixXd& V, const Eigen::MatrixXd& AV,
                                 const Eigen::MatrixXd& MV, double drop_tol = 1e-12) {
  const Index k = V.cols();
  if (k == 0) throw DegenerateBasisError("rayleigh_ritz: empty basis");

  // Pivoted Gram-Schmidt on working copies; we only need the triangular
  // factor and the pivot set, never Q itself.
  Eigen::MatrixXd W = V;
  std::vector<Index> kept;
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(k, k);  // rows follow pivot order
  double max_norm = 0.0;
  for (Index j = 0; j < k; ++j) max_norm = std::max(max_norm, W.col(j).norm());
  if (max_norm == 0.0) throw DegenerateBasisError("rayleigh_ritz: basis is numerically zero");
  const double cut = drop_tol * max_norm;

  std::vector<DenseVector> q;
  for (Index step = 0; step < k; ++step) {
    Index pivot = -1;
    double best = cut;
    for (Index j = 0; j < k; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double nj = W.col(j).norm();
      if (nj > best) {
        best = nj;
        pivot = j;
      }
    }
    if (pivot < 0) break;
    used[static_cast<std::size_t>(pivot)] = 1;
    const Index r = static_cast<Index>(kept.size());
    R(r, pivot) = best;
    DenseVector qi = W.col(pivot) / best;
    kept.push_back(pivot);
    q.push_back(qi);
    for (Index j = 0; j < k; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double proj = qi.dot(W.col(j));
      R(r, j) = proj;
      W.col(j) -= proj * qi;
    }
  }
  const Index r = static_cast<Index>(kept.size());
  if (r == 0) throw DegenerateBasisError("rayleigh_ritz: basis is numerically zero");

  // R restricted to the kept columns (pivot order) is upper triangular.
  Eigen::MatrixXd Rk(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) Rk(i, j) = R(i, kept[static_cast<std::size_t>(j)]);

  const Eigen::MatrixXd GA = V.transpose() * AV;
  const Eigen::MatrixXd GM = V.transpose() * MV;
  Eigen::MatrixXd GAk(r, r), GMk(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) {
      GAk(i, j) = GA(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
      GMk(i, j) = GM(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
    }

  // U = V(:,kept) Rk^{-1} is orthonormal to rounding, so the reduced mass
  // matrix stays SPD. Ar = Rk^{-T} GAk Rk^{-1}, same for Mr.
  const Eigen::MatrixXd rkt = Rk.transpose();
  auto sandwich = [&](const Eigen::MatrixXd& gk) {
    Eigen::MatrixXd t = rkt.triangularView<Eigen::Lower>().solve(gk);
    Eigen::MatrixXd s = rkt.triangularView<Eigen::Lower>().solve(t.transpose());
    s.transposeInPlace();
    return Eigen::MatrixXd(0.5 * (s + s.transpose()));
  };
  const Eigen::MatrixXd Ar = sandwich(GAk);
  const Eigen::MatrixXd Mr = sandwich(GMk);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar, Mr);
  if (es.info() != Eigen::Success)
    throw MatrixError("rayleigh_ritz: reduced eigenproblem failed");
  const DenseVector cr = es.eigenvectors().col(0);

  const DenseVector ck = Rk.triangularView<Eigen::Upper>().solve(cr);
  DenseVector coeffs = DenseVector::Zero(k);
  for (Index i = 0; i < r; ++i) coeffs[kept[static_cast<std::size_t>(i)]] = ck[i];
  // Deterministic sign: largest coefficient positive.
  Index imax = 0;
  coeffs.cwiseAbs().maxCoeff(&imax);
  if (coeffs[imax] < 0.0) coeffs = -coeffs;
  return {es.eigenvalues()(0), coeffs, static_cast<int>(r)};
}

}  // namespace detail

/// Smallest Ritz pair of the pencil restricted to span(basis).
struct RitzResult {
  double value;
  DenseVector coeffs;  // coordinates in the supplied basis
  DenseVector vector;  // assembled Ritz vector
};

inline RitzResult rayleigh_ritz(const std::vector<DenseVector>& basis, const MatrixPencil& p) {
  if (basis.empty()) throw DegenerateBasisError("rayleigh_ritz: empty basis");
  const Index n = p.dim();
  const Index k = static_cast<Index>(basis.size());
  Eigen::MatrixXd V(n, k), AV(n, k), MV(n, k);
  for (Index j = 0; j < k; ++j) {
    if (basis[static_cast<std::size_t>(j)].size() != n)
      throw UsageError("rayleigh_ritz: basis dimension mismatch");
    V.col(j) = basis[static_cast<std::size_t>(j)];
    AV.col(j) = p.a * V.col(j);
    MV.col(j) = p.m * V.col(j);
  }
  const auto rb = detail::ritz_in_basis(V, AV, MV);
  return {rb.value, rb.coeffs, V * rb.coeffs};
}

/// Full spectrum of (A, M) by Cholesky reduction of M followed by a dense
/// symmetric solve. Eigenvectors come back M-orthonormal, values ascending.
/// Intended as a verification oracle for small problems.
struct DenseEig {
  DenseVector values;
  Eigen::MatrixXd vectors;  // columns
};

inline DenseEig dense_generalized_eig(const MatrixPencil& p) {
  const Index n = p.dim();
  if (n > 5000) throw UsageError("dense_generalized_eig: dimension exceeds dense-solve guideline");
  const Eigen::MatrixXd A = p.a.to_dense();
  const Eigen::MatrixXd M = p.m.to_dense();
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw MatrixError("dense_generalized_eig: M is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd T = L.triangularView<Eigen::Lower>().solve(A);
  T = L.triangularView<Eigen::Lower>().solve(T.transpose()).eval();
  T = 0.5 * (T + T.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success) throw MatrixError("dense_generalized_eig: eigensolve failed");
  DenseEig out;
  out.values = es.eigenvalues();
  out.vectors = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
  return out;
}

using LinearOp = std::function<DenseVector(const DenseVector&)>;

inline constexpr unsigned kDefaultLanczosSeed = 20240611u;

/// Lanczos on the pencil (A, B) given only the actions r -> Ar and r -> B^{-1}r.
/// Runs on the operator A B^{-1} in the B^{-1} inner product, which needs one
/// application of each operator per step. Ritz values of the tridiagonal
/// matrix are returned ascending; they bracket the true extremes from inside.
struct LanczosResult {
  std::vector<double> ritz_values;  // ascending
  bool breakdown = false;
  int steps = 0;
};

namespace detail {

/// Incremental driver for the B^{-1}-inner-product Lanczos recurrence. Keeps
/// the iterate and co-iterate of each basis vector so no multiplication by B
/// is ever needed.
class PencilLanczosEngine {
public:
  PencilLanczosEngine(LinearOp apply_a, LinearOp apply_binv, Index n, unsigned seed,
                      int reortho_window)
      : apply_a_(std::move(apply_a)),
        apply_binv_(std::move(apply_binv)),
        n_(n),
        reortho_window_(reortho_window) {
    if (n <= 0) throw UsageError("pencil_lanczos: bad dimension");
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DenseVector what(n);
    for (Index i = 0; i < n; ++i) what[i] = gauss(rng);
    DenseVector w = apply_binv_(what);
    const double beta = std::sqrt(std::max(what.dot(w), 0.0));
    if (beta == 0.0) throw DomainError("pencil_lanczos: start vector collapsed");
    zhat_ = what / beta;
    z_ = w / beta;
    zhat_prev_ = DenseVector::Zero(n);
  }

  /// One three-term step. Returns false when the Krylov space is exhausted
  /// (breakdown); the tridiagonal accumulated so far stays valid.
  bool step() {
    if (broke_) return false;
    DenseVector what = apply_a_(z_);
    const double alpha = what.dot(z_);
    alphas_.push_back(alpha);
    what -= alpha * zhat_;
    if (!betas_.empty()) what -= betas_.back() * zhat_prev_;
    if (reortho_window_ > 0) {
      kept_.emplace_back(zhat_, z_);
      if (static_cast<int>(kept_.size()) > reortho_window_) kept_.erase(kept_.begin());
      for (const auto& [qh, q] : kept_) what -= what.dot(q) * qh;
    }
    scale_ = std::max(scale_, std::abs(alpha));
    const DenseVector w = apply_binv_(what);
    const double b = std::sqrt(std::max(what.dot(w), 0.0));
    if (!(b > 1e-14 * std::max(scale_, 1.0))) {
      broke_ = true;
      return false;
    }
    betas_.push_back(b);
    scale_ = std::max(scale_, b);
    zhat_prev_.swap(zhat_);
    zhat_ = what / b;
    z_ = w / b;
    return true;
  }

  int steps() const { return static_cast<int>(alphas_.size()); }
  bool breakdown() const { return broke_; }

  std::vector<double> ritz_values() const {
    const Index m = static_cast<Index>(alphas_.size());
    Eigen::VectorXd diag(m), sub(std::max<Index>(m - 1, 0));
    for (Index i = 0; i < m; ++i) diag[i] = alphas_[static_cast<std::size_t>(i)];
    for (Index i = 0; i + 1 < m; ++i) sub[i] = betas_[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return out;
  }

private:
  LinearOp apply_a_, apply_binv_;
  Index n_;
  int reortho_window_;
  DenseVector zhat_, z_, zhat_prev_;
  std::vector<double> alphas_, betas_;
  std::vector<std::pair<DenseVector, DenseVector>> kept_;
  double scale_ = 0.0;
  bool broke_ = false;
};

}  // namespace detail

inline LanczosResult pencil_lanczos(const LinearOp& apply_a, const LinearOp& apply_binv,
                                    Index n, int iters, unsigned seed = kDefaultLanczosSeed,
                                    int reortho_window = -1) {
  if (iters < 1) throw UsageError("pencil_lanczos: need at least one iteration");
  if (reortho_window < 0) reortho_window = iters <= 200 ? iters : 0;
  detail::PencilLanczosEngine eng(apply_a, apply_binv, n, seed, reortho_window);
  for (int j = 0; j < iters; ++j)
    if (!eng.step()) break;
  LanczosResult out;
  out.ritz_values = eng.ritz_values();
  out.breakdown = eng.breakdown();
  out.steps = eng.steps();
  return out;
}

/// Estimates of the extremal eigenvalues of the pencil (A, B). Estimates
/// improve monotonically with `iters`; nu_min_est >= nu_min and
/// nu_max_est <= nu_max by the Ritz bracketing property.
struct ExtremalEigs {
  double nu_min;
  double nu_max;
  bool breakdown;
};

inline ExtremalEigs extremal_pencil_eigs(const LinearOp& apply_a, const LinearOp& apply_binv,
                                         Index n, int iters,
                                         unsigned seed = kDefaultLanczosSeed) {
  const auto r = pencil_lanczos(apply_a, apply_binv, n, iters, seed);
  return {r.ritz_values.front(), r.ritz_values.back(), r.breakdown};
}

/// Long Lanczos run for a trusted smallest eigenvalue: iterates until the
/// minimal Ritz value stagnates below `stagnation_tol` relative change across
/// a probe interval, or `max_iters` is reached. No reorthogonalization; the
/// extreme Ritz value stays reliable regardless.
inline double lanczos_smallest_eigenvalue(const LinearOp& apply_a, const LinearOp& apply_binv,
                                          Index n, int max_iters,
                                          double stagnation_tol = 1e-13,
                                          unsigned seed = kDefaultLanczosSeed) {
  const int probe = 50;
  detail::PencilLanczosEngine eng(apply_a, apply_binv, n, seed, 0);
  // Without reorthogonalization the minimal Ritz value can glitch upward for
  // a few steps once eigenvalues start duplicating; it never drops below the
  // target beyond rounding, so the running minimum is the robust estimate.
  double best = std::numeric_limits<double>::infinity();
  int stable = 0;
  while (eng.steps() < max_iters) {
    bool alive = true;
    for (int j = 0; j < probe && eng.steps() < max_iters; ++j)
      if (!(alive = eng.step())) break;
    const double cur = eng.ritz_values().front();
    if (cur < best) {
      stable = (best - cur <= stagnation_tol * std::abs(cur)) ? stable + 1 : 0;
      best = cur;
    } else {
      ++stable;
    }
    if (stable >= 3) return best;
    if (!alive) break;
  }
  return best;
}

}  // namespace rap
