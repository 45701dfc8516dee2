// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/refelem.hpp"

#include <algorithm>
#include <cmath>

#include "boxfem/linsolve.hpp"

namespace boxfem {

namespace {

/// Legendre polynomial of degree k in variable `var` (0..2) on the bi-unit
/// reference box.
PolyVec legendre_1d(int k, int var) {
  const Box3 ref = Box3::reference();
  PolyVec p = PolyVec::zero(1, ref);
  const auto c = legendre_coefficients(k);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    MonoIndex m;
    m.e[static_cast<std::size_t>(var)] = static_cast<int>(i);
    p = p + PolyVec::monomial(ref, m) * c[i];
  }
  return p;
}

/// Scalar Legendre product over the given variables (entity-intrinsic).
PolyVec legendre_product(const MonoIndex& degs, int nvars) {
  PolyVec p = legendre_1d(degs.e[0], 0);
  for (int v = 1; v < nvars; ++v) p = p.multiply(legendre_1d(degs.e[static_cast<std::size_t>(v)], v));
  return p;
}

/// Scalar Legendre product on a cell's own coordinates.
PolyVec legendre_product_on_cell(const Box3& cell, const MonoIndex& degs) {
  PolyVec p = PolyVec::constant(cell, 1.0);
  for (int v = 0; v < 3; ++v) {
    const auto c = legendre_coefficients(degs.e[static_cast<std::size_t>(v)]);
    PolyVec axis_poly = PolyVec::zero(1, cell);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      MonoIndex m;
      m.e[static_cast<std::size_t>(v)] = static_cast<int>(i);
      axis_poly = axis_poly + PolyVec::monomial(cell, m) * c[i];
    }
    p = p.multiply(axis_poly);
  }
  return p;
}

void add_edge_moments(std::vector<DofSpec>& dofs, int edge, int max_deg) {
  for (int k = 0; k <= max_deg; ++k)
    dofs.push_back({DofKind::edge_tangent_moment, 1, edge, legendre_1d(k, 0), 1.0});
}

/// Vector face weight with the two components expressed in the face frame.
PolyVec face_pair(const PolyVec& q1, const PolyVec& q2) {
  return PolyVec::embed(q1, 0, 2) + PolyVec::embed(q2, 1, 2);
}

void add_face_pair_moments(std::vector<DofSpec>& dofs, DofKind kind, int face, int max_deg) {
  const Box3 ref = Box3::reference();
  for (const auto& m : monomials_total_degree(max_deg, 2)) {
    const PolyVec q = legendre_product(m, 2);
    dofs.push_back({kind, 2, face, face_pair(q, PolyVec::zero(1, ref)), 1.0});
    dofs.push_back({kind, 2, face, face_pair(PolyVec::zero(1, ref), q), 1.0});
  }
}

/// DOF group for the trimmed H(curl) family on a face: tangential moments
/// against [P_{r-3}(f)]^2 plus gradients (in the physical face coordinates)
/// of homogeneous degree-(r-1) monomials.
void add_face_trimmed_tangent_moments(std::vector<DofSpec>& dofs, const Box3& cell, int face,
                                      int r) {
  add_face_pair_moments(dofs, DofKind::face_tangent_moment, face, r - 3);
  const Box3 ref = Box3::reference();
  const FaceFrame fr = face_frame(face_axis(face));
  const double w1 = cell.halfwidth[fr.axis1], w2 = cell.halfwidth[fr.axis2];
  for (const auto& m : monomials_homogeneous(r - 1, 2)) {
    const int a = m.e[0], b = m.e[1];
    PolyVec q1 = PolyVec::zero(1, ref), q2 = PolyVec::zero(1, ref);
    if (a > 0) q1 = PolyVec::monomial(ref, {a - 1, b, 0}) * (a / w1);
    if (b > 0) q2 = PolyVec::monomial(ref, {a, b - 1, 0}) * (b / w2);
    dofs.push_back({DofKind::face_tangent_moment, 2, face, face_pair(q1, q2), 1.0});
  }
}

void add_face_normal_moments(std::vector<DofSpec>& dofs, int face, int max_deg) {
  for (const auto& m : monomials_total_degree(max_deg, 2))
    dofs.push_back({DofKind::face_normal_moment, 2, face, legendre_product(m, 2), 1.0});
}

void add_volume_scalar_moments(std::vector<DofSpec>& dofs, const Box3& cell, int max_deg) {
  for (const auto& m : monomials_total_degree(max_deg, 3))
    dofs.push_back({DofKind::volume_moment, 3, 0, legendre_product_on_cell(cell, m), 1.0});
}

void add_volume_vector_moments(std::vector<DofSpec>& dofs, const Box3& cell, int max_deg) {
  for (int comp = 0; comp < 3; ++comp)
    for (const auto& m : monomials_total_degree(max_deg, 3))
      dofs.push_back({DofKind::volume_moment, 3, 0,
                      PolyVec::embed(legendre_product_on_cell(cell, m), comp, 3), 1.0});
}

/// Interior moments of the trimmed H(curl) family: [P_{r-5}]^3 plus curls
/// of homogeneous degree-(r-3) vector monomials (reduced to a basis; empty
/// for r <= 3).
void add_volume_trimmed_moments(std::vector<DofSpec>& dofs, const Box3& cell, int r) {
  add_volume_vector_moments(dofs, cell, r - 5);
  std::vector<PolyVec> curls;
  for (int comp = 0; comp < 3; ++comp)
    for (const auto& m : monomials_homogeneous(r - 3, 3)) {
      PolyVec c = PolyVec::embed(PolyVec::monomial(cell, m), comp, 3).curl();
      if (!c.is_zero()) curls.push_back(c);
    }
  for (auto& q : reduce_to_basis(curls))
    dofs.push_back({DofKind::volume_moment, 3, 0, std::move(q), 1.0});
}

struct EntityRule {
  Quadrature rule;
  double measure = 1.0;
};

EntityRule edge_rule(const Box3& cell, int edge, int qdeg) {
  const int a = edge_axis(edge);
  const Vec3 c = cell.to_physical(local_edge_center_xi(edge));
  Vec3 h;
  h[a] = cell.halfwidth[a];
  EntityRule er;
  er.rule = gauss_entity(c, h, qdeg);
  er.measure = 2.0 * cell.halfwidth[a];
  return er;
}

EntityRule face_rule(const Box3& cell, int face, int qdeg) {
  const FaceFrame fr = face_frame(face_axis(face));
  EntityRule er;
  er.rule = gauss_face(cell, face, qdeg);
  er.measure = 4.0 * cell.halfwidth[fr.axis1] * cell.halfwidth[fr.axis2];
  return er;
}

/// Generic evaluation against callbacks for value and curl.
template <class ValueFn, class CurlFn>
double apply_dof_impl(const DofSpec& dof, const Box3& cell, ValueFn&& value, CurlFn&& curl,
                      int qdeg) {
  switch (dof.kind) {
    case DofKind::vertex_value:
      throw std::invalid_argument("apply_dof: vertex value on a vector field");
    case DofKind::edge_tangent_moment: {
      const int a = edge_axis(dof.local_index);
      const EntityRule er = edge_rule(cell, dof.local_index, qdeg);
      double s = 0.0;
      for (std::size_t i = 0; i < er.rule.size(); ++i) {
        const Vec3& p = er.rule.points[i];
        const double t = cell.to_local(p)[a];
        s += er.rule.weights[i] * value(p)[a] * dof.weight.eval_local({t, 0, 0})[0];
      }
      return dof.sign * s / er.measure;
    }
    case DofKind::face_tangent_moment:
    case DofKind::face_curl_tangent_moment:
    case DofKind::face_normal_moment: {
      const int axis = face_axis(dof.local_index);
      const FaceFrame fr = face_frame(axis);
      const EntityRule er = face_rule(cell, dof.local_index, qdeg);
      double s = 0.0;
      for (std::size_t i = 0; i < er.rule.size(); ++i) {
        const Vec3& p = er.rule.points[i];
        const Vec3 xl = cell.to_local(p);
        const Vec3 sp{xl[fr.axis1], fr.sign2 * xl[fr.axis2], 0};
        if (dof.kind == DofKind::face_normal_moment) {
          s += er.rule.weights[i] * value(p).dot(fr.normal) * dof.weight.eval_local(sp)[0];
        } else {
          const Vec3 v = (dof.kind == DofKind::face_tangent_moment) ? value(p) : curl(p);
          const Vec3 w = v.cross(fr.normal);
          const Vec3 q = dof.weight.eval_local(sp);
          s += er.rule.weights[i] * (w.dot(fr.t1) * q[0] + w.dot(fr.t2) * q[1]);
        }
      }
      return dof.sign * s / er.measure;
    }
    case DofKind::volume_moment: {
      const Quadrature rule = gauss_tensor(cell, qdeg);
      double s = 0.0;
      if (dof.weight.ncomp() == 1) {
        for (std::size_t i = 0; i < rule.size(); ++i)
          s += rule.weights[i] * value(rule.points[i])[0] *
               dof.weight.eval(rule.points[i])[0];
      } else {
        for (std::size_t i = 0; i < rule.size(); ++i)
          s += rule.weights[i] * value(rule.points[i]).dot(dof.weight.eval(rule.points[i]));
      }
      return dof.sign * s / cell.volume();
    }
  }
  throw std::invalid_argument("apply_dof: unknown kind");
}

}  // namespace

Vec3 local_vertex_xi(int v) {
  return {2.0 * (v & 1) - 1.0, 2.0 * ((v >> 1) & 1) - 1.0, 2.0 * ((v >> 2) & 1) - 1.0};
}

int edge_axis(int e) { return e / 4; }

Vec3 local_edge_center_xi(int e) {
  const int a = edge_axis(e);
  const int i1 = e % 4 % 2, i2 = e % 4 / 2;
  Vec3 xi;
  const int b = (a == 0) ? 1 : 0;
  const int c = (a == 2) ? 1 : 2;
  xi[a] = 0.0;
  xi[b] = 2.0 * i1 - 1.0;
  xi[c] = 2.0 * i2 - 1.0;
  return xi;
}

std::vector<DofSpec> dof_table(Family f, int r, const Box3& cell) {
  const int rmin = (f == Family::S0) ? 1 : 2;
  if (r < rmin) throw std::invalid_argument("dof_table: order out of range");
  const Box3 ref = Box3::reference();
  std::vector<DofSpec> dofs;
  switch (f) {
    case Family::S0:
      for (int v = 0; v < 8; ++v)
        dofs.push_back({DofKind::vertex_value, 0, v, PolyVec::constant(ref, 1.0), 1.0});
      for (int e = 0; e < 12; ++e) add_edge_moments(dofs, e, r - 2);
      // scalar face moments reuse the normal-moment kind (value * q)
      for (int face = 0; face < 6; ++face) add_face_normal_moments(dofs, face, r - 4);
      add_volume_scalar_moments(dofs, cell, r - 6);
      break;
    case Family::S1:
      for (int e = 0; e < 12; ++e) add_edge_moments(dofs, e, r - 1);
      for (int face = 0; face < 6; ++face) add_face_trimmed_tangent_moments(dofs, cell, face, r);
      add_volume_trimmed_moments(dofs, cell, r);
      break;
    case Family::SPlus1:
      for (int e = 0; e < 12; ++e) add_edge_moments(dofs, e, r - 1);
      for (int face = 0; face < 6; ++face) {
        add_face_trimmed_tangent_moments(dofs, cell, face, r);
        add_face_pair_moments(dofs, DofKind::face_curl_tangent_moment, face, r - 2);
      }
      add_volume_trimmed_moments(dofs, cell, r);
      break;
    case Family::S2:
      for (int face = 0; face < 6; ++face) add_face_normal_moments(dofs, face, r - 1);
      add_volume_vector_moments(dofs, cell, r - 3);
      break;
    case Family::SPlus2:
      for (int face = 0; face < 6; ++face) {
        add_face_pair_moments(dofs, DofKind::face_tangent_moment, face, r - 2);
        add_face_normal_moments(dofs, face, r - 1);
      }
      add_volume_vector_moments(dofs, cell, r - 3);
      break;
    case Family::S3:
      add_volume_scalar_moments(dofs, cell, r - 2);
      break;
    case Family::VBubble:
      for (int face = 0; face < 6; ++face)
        add_face_pair_moments(dofs, DofKind::face_curl_tangent_moment, face, r - 2);
      break;
    case Family::UBubble:
      for (int face = 0; face < 6; ++face)
        add_face_pair_moments(dofs, DofKind::face_tangent_moment, face, r - 2);
      break;
  }
  return dofs;
}

double apply_dof(const DofSpec& dof, const Box3& cell, const PolyVec& v, int quad_degree) {
  if (v.ncomp() == 1) {
    ScalarField f = ScalarField::from_poly(v);
    return apply_dof(dof, cell, f, quad_degree);
  }
  VectorField f = VectorField::from_poly(v);
  return apply_dof(dof, cell, f, quad_degree);
}

double apply_dof(const DofSpec& dof, const Box3& cell, const VectorField& v, int quad_degree) {
  return apply_dof_impl(
      dof, cell, [&](const Vec3& p) { return v.value(p); },
      [&](const Vec3& p) {
        if (!v.curl) throw std::invalid_argument("apply_dof: field lacks a curl callback");
        return v.curl(p);
      },
      quad_degree);
}

double apply_dof(const DofSpec& dof, const Box3& cell, const ScalarField& v, int quad_degree) {
  switch (dof.kind) {
    case DofKind::vertex_value:
      return dof.sign * v.value(cell.to_physical(local_vertex_xi(dof.local_index)));
    case DofKind::edge_tangent_moment: {
      // scalar moment against q on the edge
      const int a = edge_axis(dof.local_index);
      const EntityRule er = edge_rule(cell, dof.local_index, quad_degree);
      double s = 0.0;
      for (std::size_t i = 0; i < er.rule.size(); ++i) {
        const double t = cell.to_local(er.rule.points[i])[a];
        s += er.rule.weights[i] * v.value(er.rule.points[i]) * dof.weight.eval_local({t, 0, 0})[0];
      }
      return dof.sign * s / er.measure;
    }
    case DofKind::face_normal_moment: {
      const int axis = face_axis(dof.local_index);
      const FaceFrame fr = face_frame(axis);
      const EntityRule er = face_rule(cell, dof.local_index, quad_degree);
      double s = 0.0;
      for (std::size_t i = 0; i < er.rule.size(); ++i) {
        const Vec3 xl = cell.to_local(er.rule.points[i]);
        const Vec3 sp{xl[fr.axis1], fr.sign2 * xl[fr.axis2], 0};
        s += er.rule.weights[i] * v.value(er.rule.points[i]) * dof.weight.eval_local(sp)[0];
      }
      return dof.sign * s / er.measure;
    }
    case DofKind::volume_moment: {
      const Quadrature rule = gauss_tensor(cell, quad_degree);
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i)
        s += rule.weights[i] * v.value(rule.points[i]) * dof.weight.eval(rule.points[i])[0];
      return dof.sign * s / cell.volume();
    }
    default:
      throw std::invalid_argument("apply_dof: vector moment applied to a scalar field");
  }
}

Eigen::MatrixXd vandermonde(const SpaceBasis& space, const std::vector<DofSpec>& dofs,
                            int quad_degree) {
  if (static_cast<int>(dofs.size()) != space.dim())
    throw std::invalid_argument("vandermonde: #dofs != dim space");
  if (quad_degree < 0) quad_degree = 2 * space.order + 12;
  const int n = space.dim();
  Eigen::MatrixXd v(n, n);
  for (int j = 0; j < n; ++j) {
    const PolyVec& b = space.basis[static_cast<std::size_t>(j)];
    if (b.ncomp() == 1) {
      const ScalarField f = ScalarField::from_poly(b);
      for (int i = 0; i < n; ++i)
        v(i, j) = apply_dof(dofs[static_cast<std::size_t>(i)], space.cell, f, quad_degree);
    } else {
      const VectorField f = VectorField::from_poly(b);
      for (int i = 0; i < n; ++i)
        v(i, j) = apply_dof(dofs[static_cast<std::size_t>(i)], space.cell, f, quad_degree);
    }
  }
  return v;
}

ElementDef make_element(Family f, int r, const Box3& cell, int quad_degree) {
  ElementDef e;
  e.family = f;
  e.order = r;
  e.cell = cell;
  e.quad_degree = (quad_degree < 0) ? 2 * r + 12 : quad_degree;
  e.space = build_space(f, r, cell);
  e.dofs = dof_table(f, r, cell);
  e.vander = vandermonde(e.space, e.dofs, e.quad_degree);
  double gap = 0.0;
  const int rank = numerical_rank(e.vander, 1e-8, &gap);
  if (rank < e.ndof())
    throw UnisolvenceError(family_name(f) + ": Vandermonde rank " + std::to_string(rank) + " of " +
                           std::to_string(e.ndof()));
  e.nodal = nodal_basis(e);
  return e;
}

ElementDef translate_element(const ElementDef& elem, const Box3& new_cell) {
  ElementDef e = elem;
  e.cell = new_cell;
  e.space.cell = new_cell;
  for (auto& p : e.space.basis) p = p.translated(new_cell);
  for (auto& b : e.space.bubble) b.tangential = b.tangential.translated(new_cell);
  for (auto& p : e.nodal) p = p.translated(new_cell);
  for (auto& d : e.dofs)
    if (d.entity_dim == 3) d.weight = d.weight.translated(new_cell);
  return e;
}

std::vector<PolyVec> nodal_basis(const ElementDef& elem) {
  const Eigen::MatrixXd inv = elem.vander.partialPivLu().inverse();
  StackedPolys s = stack_polys(elem.space.basis);
  const Eigen::MatrixXd rows = inv.transpose() * s.rows;
  std::vector<PolyVec> nodal;
  nodal.reserve(static_cast<std::size_t>(elem.ndof()));
  for (int j = 0; j < elem.ndof(); ++j) nodal.push_back(unstack_row(s, rows.row(j)));
  return nodal;
}

Eigen::VectorXd local_interpolate(const ElementDef& elem, const VectorField& v) {
  Eigen::VectorXd c(elem.ndof());
  for (int i = 0; i < elem.ndof(); ++i)
    c(i) = apply_dof(elem.dofs[static_cast<std::size_t>(i)], elem.cell, v, elem.quad_degree);
  return c;
}

Eigen::VectorXd local_interpolate(const ElementDef& elem, const ScalarField& v) {
  Eigen::VectorXd c(elem.ndof());
  for (int i = 0; i < elem.ndof(); ++i)
    c(i) = apply_dof(elem.dofs[static_cast<std::size_t>(i)], elem.cell, v, elem.quad_degree);
  return c;
}

PolyVec nodal_combination(const ElementDef& elem, const Eigen::VectorXd& coef) {
  if (coef.size() != elem.ndof()) throw std::invalid_argument("nodal_combination: size mismatch");
  StackedPolys s = stack_polys(elem.nodal);
  return unstack_row(s, s.rows.transpose() * coef);
}

}  // namespace boxfem
