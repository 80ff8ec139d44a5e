// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rap/spd_matrix.hpp"

namespace rap {

/// Reads a Matrix Market coordinate file. Symmetric files carry one triangle;
/// the mirror entries are restored here. General files must already contain
/// the full symmetric pattern.
inline SpdMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw UsageError("matrix market: empty stream");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  for (auto& c : object) c = static_cast<char>(std::tolower(c));
  for (auto& c : format) c = static_cast<char>(std::tolower(c));
  for (auto& c : field) c = static_cast<char>(std::tolower(c));
  for (auto& c : symmetry) c = static_cast<char>(std::tolower(c));
  if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
    throw UsageError("matrix market: unsupported header '" + line + "'");
  if (field != "real" && field != "integer")
    throw UsageError("matrix market: only real coordinate matrices are supported");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw UsageError("matrix market: unsupported symmetry '" + symmetry + "'");

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  Index rows = 0, cols = 0;
  std::size_t nnz = 0;
  sizes >> rows >> cols >> nnz;
  if (rows != cols || rows <= 0) throw UsageError("matrix market: matrix must be square");

  std::vector<SpdMatrix::Entry> entries;
  entries.reserve(symmetric ? 2 * nnz : nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw UsageError("matrix market: truncated entry list");
    --i;
    --j;
    entries.push_back({i, j, v});
    if (symmetric && i != j) entries.push_back({j, i, v});
  }
  return SpdMatrix::from_entries(rows, std::move(entries));
}

inline SpdMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("matrix market: cannot open '" + path + "'");
  return read_matrix_market(in);
}

/// Writes the lower triangle in symmetric coordinate format.
inline void write_matrix_market(std::ostream& out, const SpdMatrix& s) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  std::size_t nnz = 0;
  const auto& ptr = s.row_offsets();
  const auto& col = s.column_indices();
  for (Index r = 0; r < s.rows(); ++r)
    for (std::size_t k = ptr[static_cast<std::size_t>(r)];
         k < ptr[static_cast<std::size_t>(r) + 1]; ++k)
      if (col[k] <= r) ++nnz;
  out << s.rows() << " " << s.rows() << " " << nnz << "\n";
  char buf[64];
  const auto& val = s.values();
  for (Index r = 0; r < s.rows(); ++r) {
    for (std::size_t k = ptr[static_cast<std::size_t>(r)];
         k < ptr[static_cast<std::size_t>(r) + 1]; ++k) {
      if (col[k] > r) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", val[k]);
      out << (r + 1) << " " << (col[k] + 1) << " " << buf << "\n";
    }
  }
}

inline void write_matrix_market(const std::string& path, const SpdMatrix& s) {
  std::ofstream out(path);
  if (!out) throw UsageError("matrix market: cannot open '" + path + "' for writing");
  write_matrix_market(out, s);
}

/// Plain-text vector files: one value per line.
inline DenseVector read_vector(std::istream& in) {
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  DenseVector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Index>(i)] = v[i];
  return out;
}

inline DenseVector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("vector file: cannot open '" + path + "'");
  return read_vector(in);
}

inline void write_vector(std::ostream& out, const DenseVector& v) {
  char buf[64];
  for (Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    out << buf << "\n";
  }
}

inline void write_vector(const std::string& path, const DenseVector& v) {
  std::ofstream out(path);
  if (!out) throw UsageError("vector file: cannot open '" + path + "' for writing");
  write_vector(out, v);
}

}  // namespace rap
