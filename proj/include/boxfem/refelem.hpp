// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boxfem/fields.hpp"
#include "boxfem/quadrature.hpp"
#include "boxfem/spaces.hpp"

namespace boxfem {

enum class DofKind {
  vertex_value,
  edge_tangent_moment,
  face_tangent_moment,
  face_curl_tangent_moment,
  face_normal_moment,
  volume_moment,
};

/// One degree-of-freedom functional. Weights are stored as polynomials in
/// entity-intrinsic coordinates: the edge parameter t, the face frame
/// (s1, s2), or the cell coordinates. All moments are normalized by the
/// entity measure, and every entity carries the global orientation
/// convention (tangent toward increasing coordinate, normal along the
/// positive axis, face frame from face_frame()), so the same functional is
/// obtained from either cell sharing the entity and all signs are +1.
struct DofSpec {
  DofKind kind = DofKind::volume_moment;
  int entity_dim = 3;
  int local_index = 0;
  PolyVec weight;
  double sign = 1.0;
};

/// Local vertex/edge geometry helpers shared with the mesh numbering:
/// vertex v = ix + 2 iy + 4 iz; edge e = 4*axis + (i1 + 2 i2) over the two
/// non-axis directions in increasing order; face f = 2*axis + side.
Vec3 local_vertex_xi(int v);
int edge_axis(int e);
Vec3 local_edge_center_xi(int e);

std::vector<DofSpec> dof_table(Family f, int r, const Box3& cell);

/// Evaluate one DOF functional against a polynomial or a smooth field.
double apply_dof(const DofSpec& dof, const Box3& cell, const PolyVec& v, int quad_degree);
double apply_dof(const DofSpec& dof, const Box3& cell, const VectorField& v, int quad_degree);
double apply_dof(const DofSpec& dof, const Box3& cell, const ScalarField& v, int quad_degree);

/// V_ij = dof_i(basis_j), with entity integrals done by Gauss rules exact
/// for the polynomial integrands.
Eigen::MatrixXd vandermonde(const SpaceBasis& space, const std::vector<DofSpec>& dofs,
                            int quad_degree = -1);

class UnisolvenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite element: shape space, DOFs, Vandermonde, and the nodal basis
/// dual to the DOFs. Immutable after construction.
struct ElementDef {
  Family family = Family::S0;
  int order = 0;
  Box3 cell;
  SpaceBasis space;
  std::vector<DofSpec> dofs;
  Eigen::MatrixXd vander;
  std::vector<PolyVec> nodal;
  int quad_degree = 0;

  int ndof() const { return static_cast<int>(dofs.size()); }
};

/// Build the element; throws UnisolvenceError if the Vandermonde matrix is
/// rank deficient at relative tolerance 1e-8.
ElementDef make_element(Family f, int r, const Box3& cell, int quad_degree = -1);

/// Move an element to a translated cell of identical half-widths without
/// rebuilding spaces or re-checking unisolvence (all quantities translate).
ElementDef translate_element(const ElementDef& elem, const Box3& new_cell);

/// Nodal (dual) basis: dof_i(nodal_j) = delta_ij.
std::vector<PolyVec> nodal_basis(const ElementDef& elem);

/// Canonical interpolation: nodal coefficients c_i = dof_i(v).
Eigen::VectorXd local_interpolate(const ElementDef& elem, const VectorField& v);
Eigen::VectorXd local_interpolate(const ElementDef& elem, const ScalarField& v);

/// Linear combination of the element's nodal basis.
PolyVec nodal_combination(const ElementDef& elem, const Eigen::VectorXd& coef);

}  // namespace boxfem
