// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "rap/error.hpp"

namespace rap {

using Index = std::int64_t;
using DenseVector = Eigen::VectorXd;

/// Sparse symmetric positive definite matrix in compressed sparse row form.
/// The full symmetric pattern is stored (both triangles) so that y = Sx is a
/// single row-wise sweep.
class SpdMatrix {
public:
  struct Entry {
    Index row;
    Index col;
    double value;
  };

  SpdMatrix() = default;

  /// Builds from coordinate entries. Duplicates are summed. The accumulated
  /// matrix must be structurally and numerically symmetric.
  static SpdMatrix from_entries(Index n, std::vector<Entry> entries) {
    if (n <= 0) throw UsageError("SpdMatrix: dimension must be positive");
    for (const Entry& e : entries) {
      if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
        throw UsageError("SpdMatrix: entry index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SpdMatrix s;
    s.n_ = n;
    s.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    std::size_t i = 0;
    while (i < entries.size()) {
      std::size_t j = i;
      double v = 0.0;
      while (j < entries.size() && entries[j].row == entries[i].row &&
             entries[j].col == entries[i].col) {
        v += entries[j].value;
        ++j;
      }
      if (v != 0.0 || entries[i].row == entries[i].col) {
        s.col_.push_back(entries[i].col);
        s.val_.push_back(v);
        ++s.row_ptr_[static_cast<std::size_t>(entries[i].row) + 1];
      }
      i = j;
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r)
      s.row_ptr_[r + 1] += s.row_ptr_[r];
    s.check_symmetry();
    return s;
  }

  static SpdMatrix identity(Index n) {
    std::vector<Entry> e;
    e.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) e.push_back({i, i, 1.0});
    return from_entries(n, std::move(e));
  }

  static SpdMatrix diagonal(const DenseVector& d) {
    std::vector<Entry> e;
    e.reserve(static_cast<std::size_t>(d.size()));
    for (Index i = 0; i < d.size(); ++i) e.push_back({i, i, d[i]});
    return from_entries(d.size(), std::move(e));
  }

  static SpdMatrix from_dense(const Eigen::MatrixXd& d, double drop_tol = 0.0) {
    if (d.rows() != d.cols()) throw UsageError("SpdMatrix: dense input not square");
    std::vector<Entry> e;
    for (Index i = 0; i < d.rows(); ++i)
      for (Index j = 0; j < d.cols(); ++j)
        if (i == j || std::abs(d(i, j)) > drop_tol) e.push_back({i, j, d(i, j)});
    return from_entries(d.rows(), std::move(e));
  }

  Index rows() const { return n_; }
  Index nonzeros() const { return static_cast<Index>(val_.size()); }

  void multiply(const DenseVector& x, DenseVector& y) const {
    if (x.size() != n_) throw UsageError("SpdMatrix::multiply: dimension mismatch");
    y.resize(n_);
    for (Index r = 0; r < n_; ++r) {
      double acc = 0.0;
      const std::size_t lo = row_ptr_[static_cast<std::size_t>(r)];
      const std::size_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
      for (std::size_t k = lo; k < hi; ++k) acc += val_[k] * x[col_[k]];
      y[r] = acc;
    }
  }

  DenseVector operator*(const DenseVector& x) const {
    DenseVector y;
    multiply(x, y);
    return y;
  }

  /// x'Sy without forming Sx when the caller already has it is cheaper; this
  /// is the convenience form.
  double inner(const DenseVector& x, const DenseVector& y) const {
    return x.dot((*this) * y);
  }

  DenseVector diagonal_vector() const {
    DenseVector d = DenseVector::Zero(n_);
    for (Index r = 0; r < n_; ++r) {
      const std::size_t lo = row_ptr_[static_cast<std::size_t>(r)];
      const std::size_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
      for (std::size_t k = lo; k < hi; ++k)
        if (col_[k] == r) d[r] = val_[k];
    }
    return d;
  }

  /// Principal submatrix S(idx, idx). Indices must be sorted and unique.
  SpdMatrix principal_submatrix(std::span<const Index> idx) const {
    std::vector<Index> pos(static_cast<std::size_t>(n_), -1);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= n_)
        throw UsageError("principal_submatrix: index out of range");
      if (k > 0 && idx[k] <= idx[k - 1])
        throw UsageError("principal_submatrix: indices must be sorted unique");
      pos[static_cast<std::size_t>(idx[k])] = static_cast<Index>(k);
    }
    std::vector<Entry> e;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Index r = idx[k];
      const std::size_t lo = row_ptr_[static_cast<std::size_t>(r)];
      const std::size_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
      for (std::size_t t = lo; t < hi; ++t) {
        const Index c = pos[static_cast<std::size_t>(col_[t])];
        if (c >= 0) e.push_back({static_cast<Index>(k), c, val_[t]});
      }
    }
    return from_entries(static_cast<Index>(idx.size()), std::move(e));
  }

  Eigen::SparseMatrix<double> to_eigen() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(val_.size());
    for (Index r = 0; r < n_; ++r) {
      const std::size_t lo = row_ptr_[static_cast<std::size_t>(r)];
      const std::size_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
      for (std::size_t k = lo; k < hi; ++k)
        t.emplace_back(static_cast<int>(r), static_cast<int>(col_[k]), val_[k]);
    }
    Eigen::SparseMatrix<double> m(n_, n_);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (Index r = 0; r < n_; ++r) {
      const std::size_t lo = row_ptr_[static_cast<std::size_t>(r)];
      const std::size_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
      for (std::size_t k = lo; k < hi; ++k) d(r, col_[k]) = val_[k];
    }
    return d;
  }

  const std::vector<std::size_t>& row_offsets() const { return row_ptr_; }
  const std::vector<Index>& column_indices() const { return col_; }
  const std::vector<double>& values() const { return val_; }

private:
  void check_symmetry() const {
    double scale = 0.0;
    for (double v : val_) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (Index r = 0; r < n_; ++r) {
      const std::size_t lo = row_ptr_[static_cast<std::size_t>(r)];
      const std::size_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
      for (std::size_t k = lo; k < hi; ++k) {
        const Index c = col_[k];
        if (c == r) continue;
        if (std::abs(entry(c, r) - val_[k]) > tol)
          throw MatrixError("SpdMatrix: input is not symmetric");
      }
    }
  }

  double entry(Index r, Index c) const {
    const std::size_t lo = row_ptr_[static_cast<std::size_t>(r)];
    const std::size_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
    const auto begin = col_.begin() + static_cast<std::ptrdiff_t>(lo);
    const auto end = col_.begin() + static_cast<std::ptrdiff_t>(hi);
    const auto it = std::lower_bound(begin, end, c);
    if (it == end || *it != c) return 0.0;
    return val_[static_cast<std::size_t>(it - col_.begin())];
  }

  Index n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> col_;
  std::vector<double> val_;
};

/// Symmetric positive definite pencil (A, M) of matching dimension. The
/// generalized eigenvalues of the pair are all strictly positive.
struct MatrixPencil {
  SpdMatrix a;
  SpdMatrix m;

  MatrixPencil() = default;
  MatrixPencil(SpdMatrix a_, SpdMatrix m_) : a(std::move(a_)), m(std::move(m_)) {
    if (a.rows() != m.rows())
      throw UsageError("MatrixPencil: dimensions of A and M disagree");
  }

  Index dim() const { return a.rows(); }
};

}  // namespace rap
