// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "boxfem/quadrature.hpp"
#include "boxfem/refelem.hpp"

namespace boxfem {

/// Geometry of a mesh entity: center plus half-extents (zero along
/// collapsed axes), and the distinguished axis (edge direction or face
/// normal; -1 for vertices and cells).
struct EntityGeom {
  Vec3 center;
  Vec3 halfwidth;
  int axis = -1;
};

/// Structured axis-aligned box partition of a box domain. Entities carry
/// global orientations: edge tangents point toward increasing coordinate
/// and face normals along the positive axis, so the frames used by shared
/// DOFs coincide for both incident cells and all DOF signs are +1.
class Mesh {
 public:
  Mesh(const Box3& domain, int n1, int n2, int n3);

  const Box3& domain() const { return domain_; }
  const std::array<int, 3>& divisions() const { return n_; }

  int n_vertices() const;
  int n_edges() const;
  int n_faces() const;
  int n_cells() const;

  Vec3 vertex(int v) const;
  Box3 cell_box(int c) const;
  /// Largest cell diameter.
  double mesh_size() const;

  std::array<int, 8> cell_vertices(int c) const;
  std::array<int, 12> cell_edges(int c) const;
  std::array<int, 6> cell_faces(int c) const;

  bool vertex_on_boundary(int v) const;
  bool edge_on_boundary(int e) const;
  bool face_on_boundary(int f) const;

  EntityGeom edge_geom(int e) const;
  EntityGeom face_geom(int f) const;
  /// The two cells incident to a face, -1 on the boundary side. The first
  /// entry is the cell on the negative side of the face normal.
  std::array<int, 2> face_cells(int f) const;

 private:
  Box3 domain_;
  std::array<int, 3> n_{};
  Vec3 h_;  // cell half-widths

  std::array<int, 3> edge_offset_{}, face_offset_{};
  void decompose_edge(int e, int& axis, std::array<int, 3>& idx) const;
  void decompose_face(int f, int& axis, std::array<int, 3>& idx) const;
  friend struct MeshIndexing;
};

Mesh build_box_mesh(const Box3& domain, int n1, int n2, int n3);

enum class Bc { none, homogeneous };

/// Global DOF numbering for one family on a mesh: vertex block, edge block,
/// face block, cell block, entities by global index, DOFs within an entity
/// in local-table order. Shared-entity DOFs receive one global index from
/// every incident cell with sign +1, which enforces the tangential-moment
/// jump conditions of the enriched spaces by construction.
struct GlobalDofMap {
  Family family = Family::S0;
  int order = 0;
  Bc bc = Bc::none;
  int total = 0;
  std::vector<std::vector<int>> cell_dofs;
  std::vector<std::vector<double>> cell_signs;
  std::vector<char> constrained;  // size total; set under homogeneous bc
  bool mean_constraint = false;   // S3 under homogeneous bc: single mean-zero row

  int n_free() const {
    int k = 0;
    for (char c : constrained)
      if (!c) ++k;
    return k;
  }
  /// Dimension of the constrained space (free DOFs minus the mean-zero row).
  int n_space() const { return n_free() - (mean_constraint ? 1 : 0); }
};

GlobalDofMap global_dofs(const Mesh& mesh, Family f, int r, Bc bc);

/// Per-entity DOF counts of a family (vertex, edge, face, interior).
std::array<int, 4> dofs_per_entity(Family f, int r);

/// Gauss rule on a mesh edge (dim 1) or face (dim 2), exact to `degree`.
Quadrature entity_trace_quadrature(const Mesh& mesh, int dim, int index, int degree);

}  // namespace boxfem
