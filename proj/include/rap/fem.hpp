// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "rap/spd_matrix.hpp"

namespace rap {

/// Uniform triangulation of the unit square with mesh size h = 2^-k. Each
/// square cell is split into two right triangles along the bottom-left to
/// top-right diagonal. Only interior (Dirichlet-eliminated) nodes carry
/// degrees of freedom.
struct StructuredMesh {
  int k = 0;          // h = 2^-k
  double h = 0.0;
  Index side = 0;     // cells per side, 2^k
  Index interior = 0; // (side - 1)^2

  /// Flat index of interior node (i, j), 1 <= i, j <= side - 1; -1 on the boundary.
  Index node_index(Index i, Index j) const {
    if (i <= 0 || i >= side || j <= 0 || j >= side) return -1;
    return (j - 1) * (side - 1) + (i - 1);
  }
};

/// h = 1 is allowed as the degenerate one-cell mesh (no interior nodes); it
/// only makes sense as the coarse level of a hierarchy without a coarse space.
inline StructuredMesh make_structured_mesh(double h) {
  if (!(h > 0.0 && h <= 1.0)) throw UsageError("make_structured_mesh: h must be in (0, 1]");
  const int k = static_cast<int>(std::lround(-std::log2(h)));
  if (k < 0 || k > 30 || std::abs(std::ldexp(1.0, -k) - h) > 1e-12 * h)
    throw UsageError("make_structured_mesh: h must be a reciprocal power of two");
  StructuredMesh m;
  m.k = k;
  m.h = std::ldexp(1.0, -k);
  m.side = Index{1} << k;
  m.interior = (m.side - 1) * (m.side - 1);
  return m;
}

/// Symmetric 2x2 coefficient {a11, a12, a22} evaluated at a point.
using CoefficientField = std::function<std::array<double, 3>(double, double)>;

/// Assembles the P1 stiffness/mass pencil of the elliptic form
///   a(u, v) = \int (a grad u) . grad v,   m(u, v) = \int u v
/// on interior nodes (Dirichlet rows and columns eliminated). The mass matrix
/// is the consistent one, not lumped. The coefficient is sampled at element
/// centroids and must be SPD there.
inline MatrixPencil assemble_laplacian_p1(const StructuredMesh& mesh,
                                          const CoefficientField& coeff) {
  const double h = mesh.h;
  const Index n = mesh.interior;
  if (n == 0) throw UsageError("assemble_laplacian_p1: mesh has no interior nodes");
  std::vector<SpdMatrix::Entry> ea, em;
  ea.reserve(static_cast<std::size_t>(9 * n));
  em.reserve(static_cast<std::size_t>(9 * n));

  const double area = 0.5 * h * h;
  // Two triangles per cell; vertex offsets in (i, j) grid units.
  const std::array<std::array<std::array<Index, 2>, 3>, 2> tris = {{
      {{{0, 0}, {1, 0}, {1, 1}}},  // lower
      {{{0, 0}, {1, 1}, {0, 1}}},  // upper
  }};

  for (Index cj = 0; cj < mesh.side; ++cj) {
    for (Index ci = 0; ci < mesh.side; ++ci) {
      for (const auto& tri : tris) {
        std::array<double, 3> px, py;
        std::array<Index, 3> dof;
        for (int v = 0; v < 3; ++v) {
          const Index i = ci + tri[static_cast<std::size_t>(v)][0];
          const Index j = cj + tri[static_cast<std::size_t>(v)][1];
          px[static_cast<std::size_t>(v)] = static_cast<double>(i) * h;
          py[static_cast<std::size_t>(v)] = static_cast<double>(j) * h;
          dof[static_cast<std::size_t>(v)] = mesh.node_index(i, j);
        }
        const double cx = (px[0] + px[1] + px[2]) / 3.0;
        const double cy = (py[0] + py[1] + py[2]) / 3.0;
        const auto [a11, a12, a22] = coeff(cx, cy);
        if (!(a11 > 0.0) || !(a11 * a22 - a12 * a12 > 0.0))
          throw DomainError("assemble_laplacian_p1: coefficient not positive definite");

        // Gradients of the barycentric basis functions.
        const double twoA = (px[1] - px[0]) * (py[2] - py[0]) - (px[2] - px[0]) * (py[1] - py[0]);
        std::array<std::array<double, 2>, 3> grad;
        grad[0] = {(py[1] - py[2]) / twoA, (px[2] - px[1]) / twoA};
        grad[1] = {(py[2] - py[0]) / twoA, (px[0] - px[2]) / twoA};
        grad[2] = {(py[0] - py[1]) / twoA, (px[1] - px[0]) / twoA};

        for (int r = 0; r < 3; ++r) {
          const Index dr = dof[static_cast<std::size_t>(r)];
          if (dr < 0) continue;
          for (int c = 0; c < 3; ++c) {
            const Index dc = dof[static_cast<std::size_t>(c)];
            if (dc < 0) continue;
            const auto& gr = grad[static_cast<std::size_t>(r)];
            const auto& gc = grad[static_cast<std::size_t>(c)];
            const double k_rc = area * (gr[0] * (a11 * gc[0] + a12 * gc[1]) +
                                        gr[1] * (a12 * gc[0] + a22 * gc[1]));
            const double m_rc = (area / 12.0) * (r == c ? 2.0 : 1.0);
            ea.push_back({dr, dc, k_rc});
            em.push_back({dr, dc, m_rc});
          }
        }
      }
    }
  }
  return {SpdMatrix::from_entries(n, std::move(ea)), SpdMatrix::from_entries(n, std::move(em))};
}

inline MatrixPencil assemble_laplacian_p1(const StructuredMesh& mesh) {
  return assemble_laplacian_p1(mesh, [](double, double) {
    return std::array<double, 3>{1.0, 0.0, 1.0};
  });
}

/// Nested pair of structured meshes with the P1 interpolation matrix between
/// them. `interp` maps coarse interior nodal values to fine interior nodal
/// values (it is the transpose of the restriction).
struct MeshHierarchy {
  StructuredMesh coarse;
  StructuredMesh fine;
  Eigen::SparseMatrix<double> interp;  // fine x coarse

  Index ratio() const { return fine.side / coarse.side; }
};

inline MeshHierarchy build_mesh_hierarchy(double H, double h) {
  MeshHierarchy hier;
  hier.coarse = make_structured_mesh(H);
  hier.fine = make_structured_mesh(h);
  if (hier.fine.k < hier.coarse.k)
    throw UsageError("build_mesh_hierarchy: fine mesh must refine the coarse mesh");

  const Index r = hier.fine.side / hier.coarse.side;
  const Index nc = hier.coarse.side;
  std::vector<Eigen::Triplet<double>> t;
  for (Index j = 1; j < hier.fine.side; ++j) {
    for (Index i = 1; i < hier.fine.side; ++i) {
      const Index row = hier.fine.node_index(i, j);
      Index ci = i / r, cj = j / r;
      if (ci >= nc) ci = nc - 1;
      if (cj >= nc) cj = nc - 1;
      const double s = static_cast<double>(i - ci * r) / static_cast<double>(r);
      const double tt = static_cast<double>(j - cj * r) / static_cast<double>(r);
      std::array<std::pair<std::array<Index, 2>, double>, 3> w;
      if (s >= tt) {
        w = {{{{ci, cj}, 1.0 - s}, {{ci + 1, cj}, s - tt}, {{ci + 1, cj + 1}, tt}}};
      } else {
        w = {{{{ci, cj}, 1.0 - tt}, {{ci + 1, cj + 1}, s}, {{ci, cj + 1}, tt - s}}};
      }
      for (const auto& [node, weight] : w) {
        if (weight == 0.0) continue;
        const Index col = hier.coarse.node_index(node[0], node[1]);
        if (col < 0) continue;  // coarse boundary value is zero
        t.emplace_back(static_cast<int>(row), static_cast<int>(col), weight);
      }
    }
  }
  hier.interp.resize(hier.fine.interior, hier.coarse.interior);
  hier.interp.setFromTriplets(t.begin(), t.end());
  return hier;
}

/// One index set per coarse cell: the fine interior nodes of the cell extended
/// by overlap_ratio * H on each side, clipped to the domain. At zero overlap
/// shared cell-boundary nodes go to the left/bottom cell. Sets are ordered
/// row-major in (cell_i, cell_j) with cell_i fastest.
inline std::vector<std::vector<Index>> subdomain_index_sets(const MeshHierarchy& hier,
                                                            double overlap_ratio) {
  if (!(overlap_ratio >= 0.0 && overlap_ratio <= 1.0))
    throw UsageError("subdomain_index_sets: overlap ratio must be in [0, 1]");
  const Index r = hier.ratio();
  const Index nc = hier.coarse.side;
  const Index nf = hier.fine.side;
  const Index e = static_cast<Index>(std::lround(overlap_ratio * static_cast<double>(r)));

  std::vector<std::vector<Index>> sets;
  sets.reserve(static_cast<std::size_t>(nc * nc));
  for (Index cj = 0; cj < nc; ++cj) {
    for (Index ci = 0; ci < nc; ++ci) {
      const Index ilo = std::max<Index>(ci * r + 1 - e, 1);
      const Index ihi = std::min<Index>((ci + 1) * r + e, nf - 1);
      const Index jlo = std::max<Index>(cj * r + 1 - e, 1);
      const Index jhi = std::min<Index>((cj + 1) * r + e, nf - 1);
      std::vector<Index> set;
      for (Index j = jlo; j <= jhi; ++j)
        for (Index i = ilo; i <= ihi; ++i) set.push_back(hier.fine.node_index(i, j));
      sets.push_back(std::move(set));
    }
  }
  return sets;
}

}  // namespace rap
