// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <functional>
#include <memory>
#include <utility>

#include "rap/spd_matrix.hpp"

namespace rap {

/// The "apply B^{-1} to a vector" capability. The wrapped action must be a
/// symmetric positive definite operator.
class PreconditionerHandle {
public:
  using ApplyFn = std::function<DenseVector(const DenseVector&)>;

  PreconditionerHandle() = default;
  PreconditionerHandle(Index n, ApplyFn apply) : n_(n), apply_(std::move(apply)) {}

  Index dim() const { return n_; }

  DenseVector apply(const DenseVector& r) const {
    if (!apply_) throw StateError("PreconditionerHandle: empty handle");
    if (r.size() != n_) throw UsageError("PreconditionerHandle: dimension mismatch");
    return apply_(r);
  }

  explicit operator bool() const { return static_cast<bool>(apply_); }

private:
  Index n_ = 0;
  ApplyFn apply_;
};

inline PreconditionerHandle identity_preconditioner(Index n) {
  return {n, [](const DenseVector& r) { return r; }};
}

inline PreconditionerHandle jacobi_preconditioner(const SpdMatrix& a) {
  auto d = std::make_shared<DenseVector>(a.diagonal_vector());
  for (Index i = 0; i < d->size(); ++i)
    if (!((*d)[i] > 0.0)) throw MatrixError("jacobi_preconditioner: nonpositive diagonal");
  return {a.rows(), [d](const DenseVector& r) -> DenseVector { return r.cwiseQuotient(*d); }};
}

/// Exact inverse via sparse Cholesky; B = A.
inline PreconditionerHandle exact_inverse_preconditioner(const SpdMatrix& a) {
  auto llt = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
  llt->compute(a.to_eigen());
  if (llt->info() != Eigen::Success)
    throw MatrixError("exact_inverse_preconditioner: Cholesky factorization failed");
  return {a.rows(), [llt](const DenseVector& r) -> DenseVector { return llt->solve(r); }};
}

}  // namespace rap
