#include <random>

#include "boxfem/bench.hpp"
#include "boxfem/complexcheck.hpp"
#include "boxfem/linsolve.hpp"
#include "doctest.h"

using namespace boxfem;

namespace {
Box3 unit_cube() { return Box3({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}); }

double fd_partial(const std::function<double(const Vec3&)>& f, const Vec3& x, int axis) {
  const double h = 1e-5;
  Vec3 a = x, b = x;
  a[axis] += h;
  b[axis] -= h;
  return (f(a) - f(b)) / (2 * h);
}
}  // namespace

TEST_CASE("symbolic expressions differentiate exactly") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unif(0.1, 0.9);

  const SymExpr x = SymExpr::coord(0), y = SymExpr::coord(1), z = SymExpr::coord(2);
  const SymExpr e = SymExpr::sin(x * 3.0) * y.pow(2) * SymExpr::cos(z * 2.0 + SymExpr::constant(0.5)) +
                    x * y * z * 4.0 - SymExpr::constant(1.5) * y.pow(3);
  for (int t = 0; t < 8; ++t) {
    const Vec3 p{unif(rng), unif(rng), unif(rng)};
    for (int axis = 0; axis < 3; ++axis) {
      const double exact = e.diff(axis).eval(p);
      const double fd = fd_partial([&](const Vec3& q) { return e.eval(q); }, p, axis);
      CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
  const CompiledExpr ce(e);
  const Vec3 p{0.3, 0.7, 0.2};
  CHECK(ce.eval(p) == doctest::Approx(e.eval(p)).epsilon(1e-14));

  CHECK_THROWS_AS(SymExpr::sin(x * y), std::invalid_argument);
}

TEST_CASE("manufactured quad-curl solution") {
  const ExactSolution ex = make_quadcurl_example(1e-2, 1.0);
  // exactly divergence-free after symbolic cancellation
  CHECK(ex.u.div().is_zero());

  // u and curl u vanish on the boundary
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  const VectorField u = ex.velocity();
  CHECK(boundary_trace_max(mesh, u) < 1e-13);
  VectorField curl_u;
  curl_u.value = u.curl;
  CHECK(boundary_trace_max(mesh, curl_u) < 1e-12);

  // analytic derivatives agree with finite differences
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> unif(0.15, 0.85);
  for (int t = 0; t < 5; ++t) {
    const Vec3 p{unif(rng), unif(rng), unif(rng)};
    const Mat3 g = u.grad(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double fd = fd_partial([&, i](const Vec3& q) { return u.value(q)[i]; }, p, j);
        CHECK(std::abs(g(i, j) - fd) <= 2e-6 * std::max(1.0, std::abs(fd)));
      }
    const Vec3 c = u.curl(p);
    CHECK(c[0] == doctest::Approx(g(2, 1) - g(1, 2)).epsilon(1e-10));
    CHECK(u.div(p) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("manufactured Brinkman solution") {
  const ExactSolution ex = make_brinkman_example(1e-2, 1.0);
  CHECK(ex.g.is_zero());
  CHECK(ex.u.div().is_zero());  // velocity is a curl

  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  CHECK(boundary_trace_max(mesh, ex.velocity()) < 1e-13);

  // pressure has zero mean
  const Quadrature rule = gauss_tensor(unit_cube(), 9);
  double mean = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) mean += rule.weights[i] * ex.p.eval(rule.points[i]);
  CHECK(std::abs(mean) < 1e-14);
}

TEST_CASE("eoc arithmetic") {
  const auto r1 = eoc({0.4, 0.1});
  CHECK(std::isnan(r1[0]));
  CHECK(r1[1] == doctest::Approx(2.0));
  CHECK(eoc({0.4, 0.2})[1] == doctest::Approx(1.0));
  CHECK(eoc({0.3, 0.3})[1] == doctest::Approx(0.0));
  CHECK(std::isnan(eoc({0.0, 0.1})[1]));
}

TEST_CASE("errors vanish for reproduced fields") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  const FeSpace vel = make_fe_space(mesh, Family::SPlus2, 2, Bc::none);
  const FeSpace pres = make_fe_space(mesh, Family::S3, 2, Bc::none);

  // exact = 0, u_h = 0
  ExactSolution zero;
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(vel.map.total);
  const Eigen::VectorXd p0 = Eigen::VectorXd::Zero(pres.map.total);
  ErrorRecord rec = compute_errors(mesh, Problem::brinkman, 1.0, 1.0, vel, u0, pres, p0, zero);
  CHECK(rec.err_triple == 0.0);
  CHECK(rec.err_l2 == 0.0);

  // u_h = interpolant of a low-degree field that the space reproduces
  const SymExpr x = SymExpr::coord(0), y = SymExpr::coord(1), z = SymExpr::coord(2);
  ExactSolution lin;
  lin.u = SymVec3(y * 2.0 - z, x * 0.5, x + y * -1.0);
  lin.p = SymExpr();
  const Eigen::VectorXd ui = global_interpolate(mesh, vel, to_field(lin.u));
  rec = compute_errors(mesh, Problem::brinkman, 1.0, 1.0, vel, ui, pres, p0, lin);
  CHECK(rec.err_l2 < 1e-10);
  CHECK(rec.err_h1_broken < 1e-9);
}

TEST_CASE("weak residual of the exact solution reduces to the face consistency term") {
  const Mesh mesh = build_box_mesh(unit_cube(), 2, 2, 2);
  const int r = 2;
  const double mu = 0.5, gamma = 1.0;
  const ExactSolution ex = make_quadcurl_example(mu, gamma);
  const VectorField u = ex.velocity();
  const VectorField f = ex.rhs();

  const FeSpace vel = make_fe_space(mesh, Family::SPlus1, r, Bc::homogeneous);

  auto weak_residual = [&](int qdeg) {
    // volume part: a_1h(u, psi_i) - (f, psi_i), cellwise quadrature
    Eigen::VectorXd resid = Eigen::VectorXd::Zero(vel.map.total);
    const Quadrature ref_rule = gauss_tensor(vel.elem.cell, qdeg);
    const ElementTab tab = tabulate_element(vel.elem, ref_rule, TabValue | TabCurl | TabGradCurl);
    const Box3 cell0 = vel.elem.cell;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Box3 box = mesh.cell_box(c);
      Eigen::VectorXd local = Eigen::VectorXd::Zero(vel.elem.ndof());
      for (std::size_t q = 0; q < ref_rule.size(); ++q) {
        const Vec3 x = box.to_physical(cell0.to_local(ref_rule.points[q]));
        const double w = ref_rule.weights[q];
        const Vec3 uv = u.value(x), uc = u.curl(x), fv = f.value(x);
        const Mat3 ug = u.grad_curl(x);
        for (int comp = 0; comp < 3; ++comp) {
          local += (w * (uc[comp] - 0.0)) * tab.curl[static_cast<std::size_t>(comp)].row(static_cast<Eigen::Index>(q)).transpose();
          local += (w * gamma * uv[comp]) * tab.value[static_cast<std::size_t>(comp)].row(static_cast<Eigen::Index>(q)).transpose();
          local -= (w * fv[comp]) * tab.value[static_cast<std::size_t>(comp)].row(static_cast<Eigen::Index>(q)).transpose();
          for (int d = 0; d < 3; ++d)
            local += (w * mu * ug(comp, d)) *
                     tab.grad_curl[static_cast<std::size_t>(comp)][static_cast<std::size_t>(d)].row(static_cast<Eigen::Index>(q)).transpose();
        }
      }
      const auto& rd = vel.map.cell_dofs[static_cast<std::size_t>(c)];
      for (int i = 0; i < vel.elem.ndof(); ++i) resid(rd[static_cast<std::size_t>(i)]) += local(i);
    }
    return resid;
  };

  auto face_term = [&](int qdeg) {
    // mu * sum_f < dn(curl u), [curl psi_i] >_f with the jump taken from the
    // negative to the positive side of the global face normal
    Eigen::VectorXd term = Eigen::VectorXd::Zero(vel.map.total);
    for (int fidx = 0; fidx < mesh.n_faces(); ++fidx) {
      const auto cells = mesh.face_cells(fidx);
      const EntityGeom geom = mesh.face_geom(fidx);
      const Vec3 nf = Vec3::axis(geom.axis);
      const Quadrature rule = entity_trace_quadrature(mesh, 2, fidx, qdeg);
      for (int side = 0; side < 2; ++side) {
        const int c = cells[static_cast<std::size_t>(side)];
        if (c < 0) continue;
        const double orient = (side == 0) ? 1.0 : -1.0;  // outward normal of the cell vs n_f
        const ElementDef elem = translate_element(vel.elem, mesh.cell_box(c));
        std::vector<PolyVec> curls;
        for (const auto& p : elem.nodal) curls.push_back(p.curl());
        const auto& rd = vel.map.cell_dofs[static_cast<std::size_t>(c)];
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Vec3& x = rule.points[q];
          const Vec3 dn = u.grad_curl(x).apply(nf);
          for (int i = 0; i < elem.ndof(); ++i) {
            const Vec3 cv = curls[static_cast<std::size_t>(i)].eval(x);
            term(rd[static_cast<std::size_t>(i)]) += rule.weights[q] * mu * orient * dn.dot(cv);
          }
        }
      }
    }
    return term;
  };

  const Eigen::VectorXd r1 = weak_residual(16);
  const Eigen::VectorXd e1 = face_term(16);
  double scale = std::max(r1.cwiseAbs().maxCoeff(), e1.cwiseAbs().maxCoeff());
  double mismatch = 0.0;
  for (int i = 0; i < vel.map.total; ++i) {
    if (vel.map.constrained[static_cast<std::size_t>(i)]) continue;
    mismatch = std::max(mismatch, std::abs(r1(i) - e1(i)));
  }
  CHECK(mismatch <= 1e-9 * scale);

  // refining the quadrature shrinks the identity mismatch
  const Eigen::VectorXd r0 = weak_residual(6);
  const Eigen::VectorXd e0 = face_term(6);
  double mismatch0 = 0.0;
  for (int i = 0; i < vel.map.total; ++i) {
    if (vel.map.constrained[static_cast<std::size_t>(i)]) continue;
    mismatch0 = std::max(mismatch0, std::abs(r0(i) - e0(i)));
  }
  CHECK(mismatch <= mismatch0);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.levels = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.levels = 2;
  cfg.params = {0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.params = {1.0};
  cfg.gamma_or_alpha = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("two-level quad-curl run: errors shrink and the multiplier stays zero") {
  RunConfig cfg;
  cfg.order = 2;
  cfg.levels = 2;
  cfg.gamma_or_alpha = 1.0;
  cfg.tol = 1e-10;
  const auto recs = run_quadcurl(cfg, 1.0, nullptr);
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].err_l2 < recs[0].err_l2);
  CHECK(recs[1].err_curl < recs[0].err_curl);
  CHECK(recs[1].err_h1_broken < recs[0].err_h1_broken);
  CHECK(recs[1].err_triple < recs[0].err_triple);
  for (const auto& r : recs) {
    CHECK(r.residual <= cfg.tol);
    CHECK(r.aux <= 10 * cfg.tol);
  }
}

TEST_CASE("interpolation error rates on the manufactured fields (coarse pair)") {
  const ExactSolution e2 = make_brinkman_example(1.0, 1.0);
  // the h=1/2 -> 1/4 pair is pre-asymptotic; the full-band check lives in
  // the acceptance suite
  const auto errs = interpolation_errors(Family::SPlus2, 2, 2, e2.velocity());
  REQUIRE(errs.size() == 2);
  const double rate = std::log2(errs[0].second / errs[1].second);
  CHECK(rate > 1.2);
  CHECK(rate < 2.6);
}
