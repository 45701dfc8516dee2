#include <cmath>

#include "boxfem/mesh.hpp"
#include "doctest.h"

using namespace boxfem;

namespace {
Box3 unit_cube() { return Box3({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}); }
}  // namespace

TEST_CASE("entity counts and Euler characteristic") {
  {
    Mesh m = build_box_mesh(unit_cube(), 2, 2, 2);
    CHECK(m.n_vertices() == 27);
    CHECK(m.n_edges() == 54);
    CHECK(m.n_faces() == 36);
    CHECK(m.n_cells() == 8);
    CHECK(m.n_vertices() - m.n_edges() + m.n_faces() - m.n_cells() == 1);
  }
  {
    Mesh m = build_box_mesh(unit_cube(), 1, 1, 1);
    CHECK(m.n_vertices() == 8);
    CHECK(m.n_edges() == 12);
    CHECK(m.n_faces() == 6);
    CHECK(m.n_cells() == 1);
  }
  for (auto [a, b, c] : {std::array<int, 3>{2, 3, 2}, {3, 1, 4}}) {
    Mesh m = build_box_mesh(unit_cube(), a, b, c);
    CHECK(m.n_vertices() - m.n_edges() + m.n_faces() - m.n_cells() == 1);
  }
}

TEST_CASE("incidence and geometry") {
  Mesh m = build_box_mesh(unit_cube(), 2, 3, 2);
  // every interior face has exactly two incident cells that list it
  std::vector<int> seen(static_cast<std::size_t>(m.n_faces()), 0);
  for (int c = 0; c < m.n_cells(); ++c)
    for (int f : m.cell_faces(c)) seen[static_cast<std::size_t>(f)]++;
  for (int f = 0; f < m.n_faces(); ++f)
    CHECK(seen[static_cast<std::size_t>(f)] == (m.face_on_boundary(f) ? 1 : 2));

  // face_cells agrees with cell_faces
  for (int f = 0; f < m.n_faces(); ++f) {
    const auto cells = m.face_cells(f);
    int count = 0;
    for (int c : cells)
      if (c >= 0) {
        ++count;
        bool found = false;
        for (int cf : m.cell_faces(c)) found = found || (cf == f);
        CHECK(found);
      }
    CHECK(count == (m.face_on_boundary(f) ? 1 : 2));
  }

  // cell boxes tile the domain volume
  double vol = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) vol += m.cell_box(c).volume();
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("entity trace quadrature") {
  Mesh m = build_box_mesh(unit_cube(), 2, 2, 2);
  // a face of the 2x2x2 unit-cube mesh has area 1/4
  for (int f = 0; f < m.n_faces(); ++f) {
    Quadrature q = entity_trace_quadrature(m, 2, f, 3);
    CHECK(q.weight_sum() == doctest::Approx(0.25).epsilon(1e-13));
    // odd moments about the face center vanish
    const EntityGeom g = m.face_geom(f);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      int t = (g.axis + 1) % 3;
      s += q.weights[i] * (q.points[i][t] - g.center[t]);
    }
    CHECK(std::abs(s) < 1e-14);
  }
  for (int e = 0; e < m.n_edges(); ++e)
    CHECK(entity_trace_quadrature(m, 1, e, 2).weight_sum() == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("global dof counts") {
  Mesh m = build_box_mesh(unit_cube(), 2, 2, 2);

  GlobalDofMap s0 = global_dofs(m, Family::S0, 2, Bc::homogeneous);
  CHECK(s0.total == 27 + 54);
  CHECK(s0.n_free() == 7);  // 1 interior vertex + 6 interior edges

  GlobalDofMap s3 = global_dofs(m, Family::S3, 2, Bc::homogeneous);
  CHECK(s3.total == 8);
  CHECK(s3.mean_constraint);
  CHECK(s3.n_space() == 7);

  Mesh single = build_box_mesh(unit_cube(), 1, 1, 1);
  GlobalDofMap sp1 = global_dofs(single, Family::SPlus1, 2, Bc::none);
  CHECK(sp1.total == 48);

  // dimension additivity from per-entity counts
  const auto per = dofs_per_entity(Family::SPlus1, 2);
  GlobalDofMap big = global_dofs(m, Family::SPlus1, 2, Bc::none);
  CHECK(big.total == per[0] * m.n_vertices() + per[1] * m.n_edges() + per[2] * m.n_faces() +
                         per[3] * m.n_cells());

  GlobalDofMap sp1h = global_dofs(m, Family::SPlus1, 2, Bc::homogeneous);
  CHECK(sp1h.n_free() == 60);  // 6 interior edges * 2 + 12 interior faces * 4
  GlobalDofMap sp2h = global_dofs(m, Family::SPlus2, 2, Bc::homogeneous);
  CHECK(sp2h.n_free() == 60);  // 12 interior faces * 5
}

TEST_CASE("shared dofs produce identical functionals from both cells") {
  Mesh m = build_box_mesh(unit_cube(), 2, 2, 2);
  // smooth global polynomial sample, interpolated cell by cell
  const Box3 ref = Box3::reference();
  PolyVec sample = PolyVec::zero(3, ref);
  int k = 1;
  for (int c = 0; c < 3; ++c)
    for (const auto& mono : monomials_total_degree(4))
      sample = sample + PolyVec::embed(PolyVec::monomial(ref, mono), c, 3) * (0.1 * ((k++ % 7) - 3));
  const VectorField v = VectorField::from_poly(sample);

  for (Family fam : {Family::SPlus1, Family::SPlus2, Family::S1, Family::S2}) {
    GlobalDofMap map = global_dofs(m, fam, 2, Bc::none);
    std::vector<double> value(static_cast<std::size_t>(map.total));
    std::vector<char> have(static_cast<std::size_t>(map.total), 0);
    for (int c = 0; c < m.n_cells(); ++c) {
      const ElementDef elem = make_element(fam, 2, m.cell_box(c));
      const Eigen::VectorXd local = local_interpolate(elem, v);
      for (int i = 0; i < elem.ndof(); ++i) {
        const int g = map.cell_dofs[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
        const double val = map.cell_signs[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] * local(i);
        if (have[static_cast<std::size_t>(g)])
          CHECK(std::abs(value[static_cast<std::size_t>(g)] - val) < 1e-11);
        value[static_cast<std::size_t>(g)] = val;
        have[static_cast<std::size_t>(g)] = 1;
      }
    }
  }
}
