#include <random>

#include "boxfem/assembly.hpp"
#include "boxfem/linsolve.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace boxfem;

namespace {
Box3 unit_cube() { return Box3({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}); }
Box3 scaled_cell() { return Box3({0.4, -0.1, 0.25}, {0.45, 0.3, 0.6}); }

Eigen::VectorXd random_vector(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = unif(rng);
  return v;
}

double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}
}  // namespace

TEST_CASE("piecewise-constant mass matrix entry is the cell volume") {
  const Box3 cell = scaled_cell();
  const ElementDef s3 = make_element(Family::S3, 2, cell);
  const Eigen::MatrixXd m = local_matrix({FormKind::mass, 1.0}, s3, s3);
  CHECK(m.rows() == 1);
  CHECK(m(0, 0) == doctest::Approx(cell.volume()).epsilon(1e-13));
}

TEST_CASE("curl terms vanish on gradient fields") {
  const Box3 cell = unit_cube();
  const ElementDef elem = make_element(Family::SPlus1, 2, cell);
  const PolyVec g = PolyVec::monomial(cell, {1, 1, 1}).grad();
  const Eigen::VectorXd c = local_interpolate(elem, VectorField::from_poly(g));
  const Eigen::MatrixXd a = local_matrix({FormKind::gradcurl_stiffness, 1.0}, elem, elem) +
                            local_matrix({FormKind::curl_mass, 1.0}, elem, elem);
  CHECK(std::abs(c.dot(a * c)) < 1e-10);
}

TEST_CASE("local matrices match the closed-form monomial oracle") {
  const Box3 cell = scaled_cell();
  const ElementDef sp1 = make_element(Family::SPlus1, 2, cell);
  const ElementDef sp2 = make_element(Family::SPlus2, 2, cell);
  const ElementDef s1 = make_element(Family::S1, 2, cell);
  const ElementDef s0 = make_element(Family::S0, 2, cell);
  const ElementDef s3 = make_element(Family::S3, 2, cell);

  CHECK(rel_frobenius(local_matrix({FormKind::mass, 1.0}, s1, s1), oracle::oracle_matrix(FormKind::mass, s1, s1)) < 1e-11);
  CHECK(rel_frobenius(local_matrix({FormKind::mass, 1.0}, sp1, sp1), oracle::oracle_matrix(FormKind::mass, sp1, sp1)) < 1e-11);
  CHECK(rel_frobenius(local_matrix({FormKind::curl_mass, 1.0}, sp1, sp1), oracle::oracle_matrix(FormKind::curl_mass, sp1, sp1)) < 1e-11);
  CHECK(rel_frobenius(local_matrix({FormKind::gradcurl_stiffness, 1.0}, sp1, sp1), oracle::oracle_matrix(FormKind::gradcurl_stiffness, sp1, sp1)) < 1e-11);
  CHECK(rel_frobenius(local_matrix({FormKind::grad_stiffness, 1.0}, sp2, sp2), oracle::oracle_matrix(FormKind::grad_stiffness, sp2, sp2)) < 1e-11);
  CHECK(rel_frobenius(local_matrix({FormKind::div_div, 1.0}, sp2, sp2), oracle::oracle_matrix(FormKind::div_div, sp2, sp2)) < 1e-11);
  CHECK(rel_frobenius(local_matrix({FormKind::b1_v_gradq, 1.0}, s0, sp1), oracle::oracle_matrix(FormKind::b1_v_gradq, s0, sp1)) < 1e-11);
  CHECK(rel_frobenius(local_matrix({FormKind::b2_divv_q, 1.0}, sp2, s3), oracle::oracle_matrix(FormKind::b2_divv_q, sp2, s3)) < 1e-11);
}

TEST_CASE("global piecewise-constant mass matrix is diagonal with cell volumes") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  const FeSpace s3 = make_fe_space(mesh, Family::S3, 2, Bc::none);
  std::vector<Triplet> t;
  assemble_forms(t, {{FormKind::mass, 1.0}}, mesh, s3, s3);
  const SparseMatrix m = SparseMatrix::from_triplets(s3.map.total, s3.map.total, t);
  const Eigen::MatrixXd d = m.to_dense();
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      CHECK(d(i, j) == doctest::Approx(i == j ? 0.125 : 0.0).epsilon(1e-12));
}

TEST_CASE("divergence block annihilates curls") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  const FeSpace sp1 = make_fe_space(mesh, Family::SPlus1, 2, Bc::none);
  const FeSpace sp2 = make_fe_space(mesh, Family::SPlus2, 2, Bc::none);
  const FeSpace s3 = make_fe_space(mesh, Family::S3, 2, Bc::none);

  std::mt19937 rng(31);
  const Eigen::VectorXd w = random_vector(sp1.map.total, rng);
  // u_h = curl w_h, interpolated cellwise into the H(div) space
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sp2.map.total);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const ElementDef e1 = translate_element(sp1.elem, mesh.cell_box(c));
    const ElementDef e2 = translate_element(sp2.elem, mesh.cell_box(c));
    const PolyVec wh = nodal_combination(e1, cell_coefficients(sp1, w, c));
    const Eigen::VectorXd local = local_interpolate(e2, VectorField::from_poly(wh.curl()));
    for (std::size_t i = 0; i < sp2.map.cell_dofs[static_cast<std::size_t>(c)].size(); ++i)
      u(sp2.map.cell_dofs[static_cast<std::size_t>(c)][i]) = local(static_cast<Eigen::Index>(i));
  }

  std::vector<Triplet> t;
  assemble_forms(t, {{FormKind::b2_divv_q, 1.0}}, mesh, sp2, s3);
  const SparseMatrix b = SparseMatrix::from_triplets(s3.map.total, sp2.map.total, t);
  CHECK((b.multiply(u)).cwiseAbs().maxCoeff() < 1e-10 * u.cwiseAbs().maxCoeff());
}

TEST_CASE("assembled saddle systems are symmetric") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  VectorField f;
  f.value = [](const Vec3& x) { return Vec3{x[1], -x[0], x[2] * x[1]}; };
  ScalarField g;
  g.value = [](const Vec3&) { return 0.0; };

  const FeSpace v1 = make_fe_space(mesh, Family::SPlus1, 2, Bc::homogeneous);
  const FeSpace p1 = make_fe_space(mesh, Family::S0, 2, Bc::homogeneous);
  const AssembledSystem quad = assemble_quadcurl_system(mesh, v1, p1, 1.0, 1.0, f);
  CHECK(quad.matrix.is_symmetric(1e-12));

  const FeSpace v2 = make_fe_space(mesh, Family::SPlus2, 2, Bc::homogeneous);
  const FeSpace p2 = make_fe_space(mesh, Family::S3, 2, Bc::homogeneous);
  const AssembledSystem brink = assemble_brinkman_system(mesh, v2, p2, 1.0, 1.0, f, g);
  CHECK(brink.matrix.is_symmetric(1e-12));
  CHECK(brink.multiplier);
  CHECK(brink.size() == v2.map.total + p2.map.total + 1);
}

TEST_CASE("quadcurl A-block is positive definite on the discrete divergence-free subspace") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  const FeSpace v = make_fe_space(mesh, Family::SPlus1, 2, Bc::homogeneous);
  const FeSpace p = make_fe_space(mesh, Family::S0, 2, Bc::homogeneous);
  VectorField f;
  f.value = [](const Vec3&) { return Vec3{0, 0, 0}; };
  const AssembledSystem sys = assemble_quadcurl_system(mesh, v, p, 1.0, 1.0, f);
  const Eigen::MatrixXd full = sys.matrix.to_dense();

  std::vector<int> ufree, pfree;
  for (int i = 0; i < sys.n_u; ++i)
    if (!v.map.constrained[static_cast<std::size_t>(i)]) ufree.push_back(i);
  for (int i = 0; i < sys.n_p; ++i)
    if (!p.map.constrained[static_cast<std::size_t>(i)]) pfree.push_back(sys.n_u + i);

  Eigen::MatrixXd a(ufree.size(), ufree.size());
  for (std::size_t i = 0; i < ufree.size(); ++i)
    for (std::size_t j = 0; j < ufree.size(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          full(ufree[i], ufree[j]);
  Eigen::MatrixXd bt(pfree.size(), ufree.size());
  for (std::size_t i = 0; i < pfree.size(); ++i)
    for (std::size_t j = 0; j < ufree.size(); ++j)
      bt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = full(pfree[i], ufree[j]);

  // semidefinite on the whole space
  CHECK(dense_eigs_smallest(a) > -1e-10 * a.norm());
  // definite on ker(B^T)
  const Eigen::MatrixXd z = kernel_basis(bt, 1e-10);
  REQUIRE(z.cols() > 0);
  const Eigen::MatrixXd az = z.transpose() * a * z;
  CHECK(dense_eigs_smallest(0.5 * (az + az.transpose())) > 1e-8);
}

TEST_CASE("reconstructed fields satisfy the interface jump conditions") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  std::mt19937 rng(37);
  for (int r : {2, 3}) {
    const FeSpace sp1 = make_fe_space(mesh, Family::SPlus1, r, Bc::none);
    const FeSpace sp2 = make_fe_space(mesh, Family::SPlus2, r, Bc::none);
    const Eigen::VectorXd c1 = random_vector(sp1.map.total, rng);
    const Eigen::VectorXd c2 = random_vector(sp2.map.total, rng);

    for (int face = 0; face < mesh.n_faces(); ++face) {
      if (mesh.face_on_boundary(face)) continue;
      const auto cells = mesh.face_cells(face);
      const EntityGeom geom = mesh.face_geom(face);
      const FaceFrame fr = face_frame(geom.axis);
      const Quadrature rule = entity_trace_quadrature(mesh, 2, face, 2 * r + 10);

      const PolyVec a1 = nodal_combination(translate_element(sp1.elem, mesh.cell_box(cells[0])),
                                           cell_coefficients(sp1, c1, cells[0]));
      const PolyVec b1 = nodal_combination(translate_element(sp1.elem, mesh.cell_box(cells[1])),
                                           cell_coefficients(sp1, c1, cells[1]));
      const PolyVec a2 = nodal_combination(translate_element(sp2.elem, mesh.cell_box(cells[0])),
                                           cell_coefficients(sp2, c2, cells[0]));
      const PolyVec b2 = nodal_combination(translate_element(sp2.elem, mesh.cell_box(cells[1])),
                                           cell_coefficients(sp2, c2, cells[1]));
      const PolyVec ca = a1.curl(), cb = b1.curl();

      // moments of the tangential jumps against [P_{r-2}(f)]^2
      for (const auto& mono : monomials_total_degree(r - 2, 2)) {
        for (int comp = 0; comp < 2; ++comp) {
          double m_curl = 0.0, m_tan = 0.0, scale = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec3& x = rule.points[q];
            double s1 = 0, s2 = 0;
            {
              const Vec3 d = x - geom.center;
              s1 = d[fr.axis1] / geom.halfwidth[fr.axis1];
              s2 = fr.sign2 * d[fr.axis2] / geom.halfwidth[fr.axis2];
            }
            const double qv = std::pow(s1, mono.e[0]) * std::pow(s2, mono.e[1]);
            const Vec3 t = (comp == 0) ? fr.t1 : fr.t2;
            const Vec3 jump_curl = ca.eval(x).cross(fr.normal) - cb.eval(x).cross(fr.normal);
            const Vec3 jump_tan = a2.eval(x).cross(fr.normal) - b2.eval(x).cross(fr.normal);
            m_curl += rule.weights[q] * jump_curl.dot(t) * qv;
            m_tan += rule.weights[q] * jump_tan.dot(t) * qv;
            scale += rule.weights[q] * (ca.eval(x).norm() + a2.eval(x).norm());
          }
          CHECK(std::abs(m_curl) < 1e-10 * std::max(scale, 1.0));
          CHECK(std::abs(m_tan) < 1e-10 * std::max(scale, 1.0));
        }
      }
    }
  }
}

TEST_CASE("load assembly") {
  const Mesh mesh = build_box_mesh(unit_cube(), 1, 1, 1);
  const FeSpace sp2 = make_fe_space(mesh, Family::SPlus2, 2, Bc::homogeneous);

  VectorField zero;
  zero.value = [](const Vec3&) { return Vec3{0, 0, 0}; };
  CHECK(assemble_load(zero, mesh, sp2).cwiseAbs().maxCoeff() == 0.0);

  VectorField constf;
  constf.value = [](const Vec3&) { return Vec3{1.0, -2.0, 0.5}; };
  const Eigen::VectorXd rhs = assemble_load(constf, mesh, sp2);
  // against the closed-form oracle
  const Box3 cell = mesh.cell_box(0);
  PolyVec cpoly = PolyVec::embed(PolyVec::constant(cell, 1.0), 0, 3) +
                  PolyVec::embed(PolyVec::constant(cell, -2.0), 1, 3) +
                  PolyVec::embed(PolyVec::constant(cell, 0.5), 2, 3);
  for (int i = 0; i < sp2.elem.ndof(); ++i)
    CHECK(rhs(i) == doctest::Approx(oracle::inner(sp2.elem.nodal[static_cast<std::size_t>(i)], cpoly))
                        .epsilon(1e-11));

  // quadrature refinement changes nothing for smooth data
  VectorField smooth;
  smooth.value = [](const Vec3& x) {
    return Vec3{std::sin(3 * x[0]) * x[1], std::cos(2 * x[1]), x[2] * x[0] * x[1]};
  };
  const Eigen::VectorXd r1 = assemble_load(smooth, mesh, sp2, 4);
  const Eigen::VectorXd r2 = assemble_load(smooth, mesh, sp2, 12);
  CHECK((r1 - r2).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, r2.cwiseAbs().maxCoeff()));
}

TEST_CASE("small Brinkman system solves to tolerance") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  const FeSpace v = make_fe_space(mesh, Family::SPlus2, 2, Bc::homogeneous);
  const FeSpace p = make_fe_space(mesh, Family::S3, 2, Bc::homogeneous);
  VectorField f;
  f.value = [](const Vec3& x) {
    return Vec3{std::sin(x[0] + x[1]), x[2] - 0.3, x[0] * x[1]};
  };
  ScalarField g;
  g.value = [](const Vec3&) { return 0.0; };
  const AssembledSystem sys = assemble_brinkman_system(mesh, v, p, 1e-2, 1.0, f, g);
  const SolveResult sol = solve_sym_indef(sys.matrix, sys.rhs, 1e-10, 0, &sys.scaling);
  CHECK(sol.rel_residual <= 1e-10);
}
