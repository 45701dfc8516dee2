// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/mesh.hpp"

#include <stdexcept>

namespace boxfem {

namespace {

struct Lattice {
  std::array<int, 3> dims{};
  int size() const { return dims[0] * dims[1] * dims[2]; }
  int id(int i, int j, int k) const { return i + dims[0] * (j + dims[1] * k); }
  std::array<int, 3> coords(int id) const {
    return {id % dims[0], (id / dims[0]) % dims[1], id / (dims[0] * dims[1])};
  }
};

Lattice vertex_lattice(const std::array<int, 3>& n) { return {{n[0] + 1, n[1] + 1, n[2] + 1}}; }
Lattice cell_lattice(const std::array<int, 3>& n) { return {{n[0], n[1], n[2]}}; }

/// Edge lattice for edges along `axis`: cells along the axis, vertices across.
Lattice edge_lattice(const std::array<int, 3>& n, int axis) {
  Lattice l = vertex_lattice(n);
  l.dims[static_cast<std::size_t>(axis)] = n[static_cast<std::size_t>(axis)];
  return l;
}

/// Face lattice for faces with normal `axis`: vertices along the axis, cells across.
Lattice face_lattice(const std::array<int, 3>& n, int axis) {
  Lattice l = cell_lattice(n);
  l.dims[static_cast<std::size_t>(axis)] = n[static_cast<std::size_t>(axis)] + 1;
  return l;
}

}  // namespace

Mesh::Mesh(const Box3& domain, int n1, int n2, int n3) : domain_(domain), n_{n1, n2, n3} {
  if (n1 < 1 || n2 < 1 || n3 < 1) throw std::invalid_argument("Mesh: divisions must be >= 1");
  for (int a = 0; a < 3; ++a) h_[a] = domain.halfwidth[a] / n_[static_cast<std::size_t>(a)];
  int eoff = 0, foff = 0;
  for (int a = 0; a < 3; ++a) {
    edge_offset_[static_cast<std::size_t>(a)] = eoff;
    eoff += edge_lattice(n_, a).size();
    face_offset_[static_cast<std::size_t>(a)] = foff;
    foff += face_lattice(n_, a).size();
  }
}

int Mesh::n_vertices() const { return vertex_lattice(n_).size(); }
int Mesh::n_edges() const {
  int s = 0;
  for (int a = 0; a < 3; ++a) s += edge_lattice(n_, a).size();
  return s;
}
int Mesh::n_faces() const {
  int s = 0;
  for (int a = 0; a < 3; ++a) s += face_lattice(n_, a).size();
  return s;
}
int Mesh::n_cells() const { return cell_lattice(n_).size(); }

Vec3 Mesh::vertex(int v) const {
  const auto c = vertex_lattice(n_).coords(v);
  Vec3 lo = domain_.center - domain_.halfwidth;
  return {lo[0] + 2.0 * h_[0] * c[0], lo[1] + 2.0 * h_[1] * c[1], lo[2] + 2.0 * h_[2] * c[2]};
}

Box3 Mesh::cell_box(int c) const {
  const auto idx = cell_lattice(n_).coords(c);
  Vec3 lo = domain_.center - domain_.halfwidth;
  Vec3 center{lo[0] + h_[0] * (2.0 * idx[0] + 1.0), lo[1] + h_[1] * (2.0 * idx[1] + 1.0),
              lo[2] + h_[2] * (2.0 * idx[2] + 1.0)};
  return Box3(center, h_);
}

double Mesh::mesh_size() const { return h_.norm(); }

std::array<int, 8> Mesh::cell_vertices(int c) const {
  const auto idx = cell_lattice(n_).coords(c);
  const Lattice vl = vertex_lattice(n_);
  std::array<int, 8> out{};
  for (int v = 0; v < 8; ++v)
    out[static_cast<std::size_t>(v)] =
        vl.id(idx[0] + (v & 1), idx[1] + ((v >> 1) & 1), idx[2] + ((v >> 2) & 1));
  return out;
}

std::array<int, 12> Mesh::cell_edges(int c) const {
  const auto idx = cell_lattice(n_).coords(c);
  std::array<int, 12> out{};
  for (int e = 0; e < 12; ++e) {
    const int a = edge_axis(e);
    const int i1 = e % 4 % 2, i2 = e % 4 / 2;
    const int b = (a == 0) ? 1 : 0;
    const int cc = (a == 2) ? 1 : 2;
    std::array<int, 3> g = idx;
    g[static_cast<std::size_t>(b)] += i1;
    g[static_cast<std::size_t>(cc)] += i2;
    out[static_cast<std::size_t>(e)] =
        edge_offset_[static_cast<std::size_t>(a)] + edge_lattice(n_, a).id(g[0], g[1], g[2]);
  }
  return out;
}

std::array<int, 6> Mesh::cell_faces(int c) const {
  const auto idx = cell_lattice(n_).coords(c);
  std::array<int, 6> out{};
  for (int f = 0; f < 6; ++f) {
    const int a = face_axis(f);
    std::array<int, 3> g = idx;
    g[static_cast<std::size_t>(a)] += face_side(f);
    out[static_cast<std::size_t>(f)] =
        face_offset_[static_cast<std::size_t>(a)] + face_lattice(n_, a).id(g[0], g[1], g[2]);
  }
  return out;
}

void Mesh::decompose_edge(int e, int& axis, std::array<int, 3>& idx) const {
  axis = 2;
  while (axis > 0 && e < edge_offset_[static_cast<std::size_t>(axis)]) --axis;
  idx = edge_lattice(n_, axis).coords(e - edge_offset_[static_cast<std::size_t>(axis)]);
}

void Mesh::decompose_face(int f, int& axis, std::array<int, 3>& idx) const {
  axis = 2;
  while (axis > 0 && f < face_offset_[static_cast<std::size_t>(axis)]) --axis;
  idx = face_lattice(n_, axis).coords(f - face_offset_[static_cast<std::size_t>(axis)]);
}

bool Mesh::vertex_on_boundary(int v) const {
  const auto c = vertex_lattice(n_).coords(v);
  for (int a = 0; a < 3; ++a)
    if (c[static_cast<std::size_t>(a)] == 0 || c[static_cast<std::size_t>(a)] == n_[static_cast<std::size_t>(a)])
      return true;
  return false;
}

bool Mesh::edge_on_boundary(int e) const {
  int axis;
  std::array<int, 3> idx;
  decompose_edge(e, axis, idx);
  for (int a = 0; a < 3; ++a) {
    if (a == axis) continue;
    if (idx[static_cast<std::size_t>(a)] == 0 || idx[static_cast<std::size_t>(a)] == n_[static_cast<std::size_t>(a)])
      return true;
  }
  return false;
}

bool Mesh::face_on_boundary(int f) const {
  int axis;
  std::array<int, 3> idx;
  decompose_face(f, axis, idx);
  return idx[static_cast<std::size_t>(axis)] == 0 ||
         idx[static_cast<std::size_t>(axis)] == n_[static_cast<std::size_t>(axis)];
}

EntityGeom Mesh::edge_geom(int e) const {
  int axis;
  std::array<int, 3> idx;
  decompose_edge(e, axis, idx);
  Vec3 lo = domain_.center - domain_.halfwidth;
  EntityGeom g;
  g.axis = axis;
  for (int a = 0; a < 3; ++a) {
    if (a == axis) {
      g.center[a] = lo[a] + h_[a] * (2.0 * idx[static_cast<std::size_t>(a)] + 1.0);
      g.halfwidth[a] = h_[a];
    } else {
      g.center[a] = lo[a] + 2.0 * h_[a] * idx[static_cast<std::size_t>(a)];
      g.halfwidth[a] = 0.0;
    }
  }
  return g;
}

EntityGeom Mesh::face_geom(int f) const {
  int axis;
  std::array<int, 3> idx;
  decompose_face(f, axis, idx);
  Vec3 lo = domain_.center - domain_.halfwidth;
  EntityGeom g;
  g.axis = axis;
  for (int a = 0; a < 3; ++a) {
    if (a == axis) {
      g.center[a] = lo[a] + 2.0 * h_[a] * idx[static_cast<std::size_t>(a)];
      g.halfwidth[a] = 0.0;
    } else {
      g.center[a] = lo[a] + h_[a] * (2.0 * idx[static_cast<std::size_t>(a)] + 1.0);
      g.halfwidth[a] = h_[a];
    }
  }
  return g;
}

std::array<int, 2> Mesh::face_cells(int f) const {
  int axis;
  std::array<int, 3> idx;
  decompose_face(f, axis, idx);
  const Lattice cl = cell_lattice(n_);
  std::array<int, 2> out{-1, -1};
  std::array<int, 3> lo = idx, hi = idx;
  lo[static_cast<std::size_t>(axis)] -= 1;
  if (lo[static_cast<std::size_t>(axis)] >= 0) out[0] = cl.id(lo[0], lo[1], lo[2]);
  if (hi[static_cast<std::size_t>(axis)] < n_[static_cast<std::size_t>(axis)])
    out[1] = cl.id(hi[0], hi[1], hi[2]);
  return out;
}

Mesh build_box_mesh(const Box3& domain, int n1, int n2, int n3) {
  return Mesh(domain, n1, n2, n3);
}

std::array<int, 4> dofs_per_entity(Family f, int r) {
  const auto dofs = dof_table(f, r, Box3::reference());
  std::array<int, 4> count{0, 0, 0, 0};
  for (const auto& d : dofs) count[static_cast<std::size_t>(d.entity_dim)]++;
  count[0] /= 8;
  count[1] /= 12;
  count[2] /= 6;
  return count;
}

GlobalDofMap global_dofs(const Mesh& mesh, Family f, int r, Bc bc) {
  GlobalDofMap map;
  map.family = f;
  map.order = r;
  map.bc = bc;

  const bool cellwise = (f == Family::VBubble || f == Family::UBubble);
  const auto per = dofs_per_entity(f, r);
  const int nv = mesh.n_vertices(), ne = mesh.n_edges(), nf = mesh.n_faces(), nc = mesh.n_cells();

  const int vertex_base = 0;
  const int edge_base = cellwise ? 0 : vertex_base + per[0] * nv;
  const int face_base = cellwise ? 0 : edge_base + per[1] * ne;
  const int cell_base = cellwise ? 0 : face_base + per[2] * nf;
  const auto table = dof_table(f, r, mesh.cell_box(0));
  const int per_cell_total = static_cast<int>(table.size());
  map.total = cellwise ? per_cell_total * nc : cell_base + per[3] * nc;

  map.cell_dofs.assign(static_cast<std::size_t>(nc), {});
  map.cell_signs.assign(static_cast<std::size_t>(nc), {});
  for (int c = 0; c < nc; ++c) {
    const auto verts = mesh.cell_vertices(c);
    const auto edges = mesh.cell_edges(c);
    const auto faces = mesh.cell_faces(c);
    auto& dofs = map.cell_dofs[static_cast<std::size_t>(c)];
    auto& signs = map.cell_signs[static_cast<std::size_t>(c)];
    dofs.reserve(table.size());
    signs.assign(table.size(), 1.0);
    std::array<int, 8> vcount{};
    std::array<int, 12> ecount{};
    std::array<int, 6> fcount{};
    int ccount = 0;
    for (const auto& d : table) {
      int g = -1;
      if (cellwise) {
        g = c * per_cell_total + static_cast<int>(dofs.size());
      } else {
        switch (d.entity_dim) {
          case 0:
            g = vertex_base + verts[static_cast<std::size_t>(d.local_index)] * per[0] +
                vcount[static_cast<std::size_t>(d.local_index)]++;
            break;
          case 1:
            g = edge_base + edges[static_cast<std::size_t>(d.local_index)] * per[1] +
                ecount[static_cast<std::size_t>(d.local_index)]++;
            break;
          case 2:
            g = face_base + faces[static_cast<std::size_t>(d.local_index)] * per[2] +
                fcount[static_cast<std::size_t>(d.local_index)]++;
            break;
          case 3:
            g = cell_base + c * per[3] + ccount++;
            break;
        }
      }
      dofs.push_back(g);
    }
  }

  map.constrained.assign(static_cast<std::size_t>(map.total), 0);
  if (bc == Bc::homogeneous) {
    if (f == Family::S3) {
      map.mean_constraint = true;
    } else if (!cellwise) {
      for (int v = 0; v < nv; ++v)
        if (mesh.vertex_on_boundary(v))
          for (int k = 0; k < per[0]; ++k)
            map.constrained[static_cast<std::size_t>(vertex_base + v * per[0] + k)] = 1;
      for (int e = 0; e < ne; ++e)
        if (mesh.edge_on_boundary(e))
          for (int k = 0; k < per[1]; ++k)
            map.constrained[static_cast<std::size_t>(edge_base + e * per[1] + k)] = 1;
      for (int fi = 0; fi < nf; ++fi)
        if (mesh.face_on_boundary(fi))
          for (int k = 0; k < per[2]; ++k)
            map.constrained[static_cast<std::size_t>(face_base + fi * per[2] + k)] = 1;
    }
  }
  return map;
}

Quadrature entity_trace_quadrature(const Mesh& mesh, int dim, int index, int degree) {
  if (dim == 1) {
    const EntityGeom g = mesh.edge_geom(index);
    return gauss_entity(g.center, g.halfwidth, degree);
  }
  if (dim == 2) {
    const EntityGeom g = mesh.face_geom(index);
    return gauss_entity(g.center, g.halfwidth, degree);
  }
  throw std::invalid_argument("entity_trace_quadrature: dim must be 1 or 2");
}

}  // namespace boxfem
