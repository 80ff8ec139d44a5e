// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <utility>
#include <vector>

#include "rap/core.hpp"
#include "rap/fem.hpp"
#include "rap/paired.hpp"
#include "rap/preconditioner.hpp"
#include "rap/spd_matrix.hpp"

namespace rap {

/// Two-level overlapping additive Schwarz data: coarse interpolation, one
/// index set per subdomain, the Galerkin coarse matrix, the local principal
/// submatrices of A, and their factorizations. Local solves are exact.
struct SchwarzDecomposition {
  using Factor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;

  Index n = 0;                              // fine dimension
  Eigen::SparseMatrix<double> coarse_interp;  // fine x coarse, may have 0 columns
  std::vector<std::vector<Index>> subdomain_sets;
  SpdMatrix coarse_matrix;
  std::vector<SpdMatrix> local_matrices;
  std::shared_ptr<Factor> coarse_factor;
  std::vector<std::shared_ptr<Factor>> local_factors;

  bool factorized() const {
    if (coarse_interp.cols() > 0 && !coarse_factor) return false;
    return local_factors.size() == subdomain_sets.size();
  }
};

/// Builds the decomposition from an interpolation operator and explicit index
/// sets: Galerkin coarse matrix, exact local factorizations. The union of the
/// sets together with the coarse space must cover all indices.
inline SchwarzDecomposition make_schwarz_decomposition(
    Eigen::SparseMatrix<double> coarse_interp, std::vector<std::vector<Index>> sets,
    const SpdMatrix& a) {
  SchwarzDecomposition d;
  d.n = a.rows();
  if (coarse_interp.size() > 0 && coarse_interp.rows() != d.n)
    throw UsageError("make_schwarz_decomposition: interpolation rows mismatch A");
  if (coarse_interp.size() == 0) coarse_interp.resize(d.n, 0);
  d.coarse_interp = std::move(coarse_interp);
  d.subdomain_sets = std::move(sets);

  std::vector<char> covered(static_cast<std::size_t>(d.n), 0);
  for (Index r = 0; r < d.coarse_interp.outerSize(); ++r)
    for (Eigen::SparseMatrix<double>::InnerIterator it(d.coarse_interp, r); it; ++it)
      covered[static_cast<std::size_t>(it.row())] = 1;

  if (d.coarse_interp.cols() > 0) {
    const Eigen::SparseMatrix<double> a_eig = a.to_eigen();
    Eigen::SparseMatrix<double> g =
        d.coarse_interp.transpose() * (a_eig * d.coarse_interp).eval();
    const Eigen::SparseMatrix<double> gt = g.transpose();
    g = 0.5 * (g + gt);
    std::vector<SpdMatrix::Entry> entries;
    for (Index c = 0; c < g.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(g, c); it; ++it)
        entries.push_back({it.row(), it.col(), it.value()});
    d.coarse_matrix = SpdMatrix::from_entries(g.rows(), std::move(entries));
    d.coarse_factor = std::make_shared<SchwarzDecomposition::Factor>();
    d.coarse_factor->compute(d.coarse_matrix.to_eigen());
    if (d.coarse_factor->info() != Eigen::Success)
      throw ConstructionError("make_schwarz_decomposition: coarse matrix not SPD");
  }

  for (const auto& set : d.subdomain_sets) {
    if (set.empty())
      throw ConstructionError("make_schwarz_decomposition: empty subdomain");
    for (Index i : set) covered[static_cast<std::size_t>(i)] = 1;
    SpdMatrix local = a.principal_submatrix(set);
    auto f = std::make_shared<SchwarzDecomposition::Factor>();
    f->compute(local.to_eigen());
    if (f->info() != Eigen::Success)
      throw ConstructionError("make_schwarz_decomposition: local matrix not SPD");
    d.local_matrices.push_back(std::move(local));
    d.local_factors.push_back(std::move(f));
  }

  for (Index i = 0; i < d.n; ++i)
    if (!covered[static_cast<std::size_t>(i)])
      throw ConstructionError("make_schwarz_decomposition: index not covered by any space");
  return d;
}

/// Two-level overlapping method on a structured hierarchy: one subdomain per
/// coarse cell, extended by overlap_ratio * H, plus the coarse space.
inline SchwarzDecomposition build_two_level_overlapping(const MeshHierarchy& hier,
                                                        double overlap_ratio,
                                                        const SpdMatrix& a) {
  if (hier.fine.interior != a.rows())
    throw UsageError("build_two_level_overlapping: hierarchy does not match A");
  return make_schwarz_decomposition(hier.interp, subdomain_index_sets(hier, overlap_ratio), a);
}

/// B^{-1} r = R0' A0^{-1} R0 r + sum_i E_i A_i^{-1} (r restricted to set_i).
inline DenseVector schwarz_apply(const SchwarzDecomposition& d, const DenseVector& r) {
  if (r.size() != d.n) throw UsageError("schwarz_apply: dimension mismatch");
  if (!d.factorized()) throw StateError("schwarz_apply: decomposition is not factorized");
  DenseVector out = DenseVector::Zero(d.n);
  if (d.coarse_interp.cols() > 0) {
    const DenseVector rc = d.coarse_interp.transpose() * r;
    out += d.coarse_interp * d.coarse_factor->solve(rc);
  }
  for (std::size_t s = 0; s < d.subdomain_sets.size(); ++s) {
    const auto& set = d.subdomain_sets[s];
    DenseVector local(static_cast<Index>(set.size()));
    for (std::size_t k = 0; k < set.size(); ++k)
      local[static_cast<Index>(k)] = r[set[k]];
    const DenseVector sol = d.local_factors[s]->solve(local);
    for (std::size_t k = 0; k < set.size(); ++k)
      out[set[k]] += sol[static_cast<Index>(k)];
  }
  return out;
}

inline PreconditionerHandle schwarz_preconditioner(std::shared_ptr<const SchwarzDecomposition> d) {
  if (!d) throw UsageError("schwarz_preconditioner: null decomposition");
  const Index n = d->n;
  return {n, [d](const DenseVector& r) { return schwarz_apply(*d, r); }};
}

/// Initial guess from the coarse eigenproblem: solves the coarse pencil for
/// its smallest eigenvector u0, sets xhat0 = R0' u0 and x0 = B^{-1} xhat0,
/// and returns the B-normalized pair. Coarse problems beyond the dense-solve
/// guideline fall back to inverse power iteration at tolerance 1e-12.
inline PairedVector coarse_eigen_initial(const MeshHierarchy& hier,
                                         const MatrixPencil& coarse_pencil,
                                         const PreconditionerHandle& pc) {
  const Index nc = hier.interp.cols();
  if (coarse_pencil.dim() != nc)
    throw UsageError("coarse_eigen_initial: coarse pencil does not match hierarchy");
  if (nc == 0) throw DomainError("coarse_eigen_initial: hierarchy has no coarse space");

  DenseVector u0;
  if (nc <= 5000) {
    u0 = dense_generalized_eig(coarse_pencil).vectors.col(0);
  } else {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(coarse_pencil.a.to_eigen());
    if (llt.info() != Eigen::Success)
      throw MatrixError("coarse_eigen_initial: coarse stiffness not SPD");
    DenseVector u = DenseVector::Ones(nc);
    double rho_prev = rayleigh_quotient(coarse_pencil, u);
    for (int it = 0; it < 10000; ++it) {
      u = llt.solve(coarse_pencil.m * u);
      u /= u.norm();
      const double rho = rayleigh_quotient(coarse_pencil, u);
      if (std::abs(rho_prev - rho) <= 1e-12 * std::abs(rho)) break;
      rho_prev = rho;
    }
    u0 = u;
  }

  const DenseVector xhat0 = hier.interp * u0;
  return paired_normalize({pc.apply(xhat0), xhat0});
}

}  // namespace rap
