#include <map>
#include <random>

#include "boxfem/linsolve.hpp"
#include "boxfem/refelem.hpp"
#include "doctest.h"

using namespace boxfem;

namespace {

Box3 anisotropic_box() { return Box3({0.3, -0.2, 0.7}, {0.7, 0.35, 0.52}); }

PolyVec random_member(const SpaceBasis& s, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  PolyVec p = PolyVec::zero(s.basis.front().ncomp(), s.cell);
  for (const auto& b : s.basis) p = p + b * unif(rng);
  return p;
}

/// Random smooth sample: a polynomial of degree well above the element
/// order, with exact derivative callbacks.
PolyVec random_smooth_poly(const Box3& cell, int deg, int ncomp, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  PolyVec p = PolyVec::zero(ncomp, cell);
  for (int c = 0; c < ncomp; ++c)
    for (const auto& m : monomials_total_degree(deg))
      p = p + PolyVec::embed(PolyVec::monomial(cell, m), c, ncomp) * unif(rng);
  return p;
}

VectorField field_minus_poly(const VectorField& v, const PolyVec& p) {
  const VectorField q = VectorField::from_poly(p);
  VectorField out;
  out.value = [v, q](const Vec3& x) { return v.value(x) - q.value(x); };
  out.curl = [v, q](const Vec3& x) { return v.curl(x) - q.curl(x); };
  return out;
}

std::map<DofKind, int> count_kinds(const std::vector<DofSpec>& dofs) {
  std::map<DofKind, int> c;
  for (const auto& d : dofs) c[d.kind]++;
  return c;
}

}  // namespace

TEST_CASE("dof tables") {
  const Box3 cell = Box3::reference();

  auto sp1 = dof_table(Family::SPlus1, 2, cell);
  CHECK(sp1.size() == 48);
  auto c1 = count_kinds(sp1);
  CHECK(c1[DofKind::edge_tangent_moment] == 24);
  CHECK(c1[DofKind::face_tangent_moment] == 12);
  CHECK(c1[DofKind::face_curl_tangent_moment] == 12);
  CHECK(c1[DofKind::volume_moment] == 0);

  auto sp2 = dof_table(Family::SPlus2, 2, cell);
  CHECK(sp2.size() == 30);
  auto c2 = count_kinds(sp2);
  CHECK(c2[DofKind::face_normal_moment] == 18);
  CHECK(c2[DofKind::face_tangent_moment] == 12);

  auto s0 = dof_table(Family::S0, 2, cell);
  CHECK(s0.size() == 20);
  auto c0 = count_kinds(s0);
  CHECK(c0[DofKind::vertex_value] == 8);
  CHECK(c0[DofKind::edge_tangent_moment] == 12);

  CHECK(dof_table(Family::S3, 2, cell).size() == 1);
  CHECK(dof_table(Family::S1, 3, cell).size() == 66);
  CHECK(dof_table(Family::SPlus1, 3, cell).size() == 102);
  CHECK(dof_table(Family::SPlus2, 3, cell).size() == 75);
}

TEST_CASE("unisolvence") {
  for (int r : {2, 3}) {
    for (const Box3& cell : {Box3::reference(), anisotropic_box()}) {
      for (Family f : {Family::S0, Family::S1, Family::S2, Family::S3, Family::SPlus1,
                       Family::SPlus2, Family::VBubble, Family::UBubble}) {
        const SpaceBasis space = build_space(f, r, cell);
        const auto dofs = dof_table(f, r, cell);
        REQUIRE(static_cast<int>(dofs.size()) == space.dim());
        const Eigen::MatrixXd v = vandermonde(space, dofs);
        double gap = 0.0;
        const int rank = numerical_rank(v, 1e-8, &gap);
        CHECK(rank == space.dim());
        CHECK(gap >= 1e3);
      }
    }
  }
}

TEST_CASE("nodal basis duality") {
  std::mt19937 rng(11);
  for (Family f : {Family::S0, Family::SPlus1, Family::SPlus2, Family::S2}) {
    const ElementDef elem = make_element(f, 2, anisotropic_box());
    // re-evaluate the dofs against the nodal polynomials
    for (int j = 0; j < elem.ndof(); ++j) {
      const PolyVec& phi = elem.nodal[static_cast<std::size_t>(j)];
      for (int i = 0; i < elem.ndof(); ++i) {
        const double v =
            apply_dof(elem.dofs[static_cast<std::size_t>(i)], elem.cell, phi, elem.quad_degree);
        CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-9);
      }
    }
  }
}

TEST_CASE("interpolation reproduces space members") {
  std::mt19937 rng(13);
  for (int r : {2, 3}) {
    for (Family f : {Family::S0, Family::S1, Family::S2, Family::SPlus1, Family::SPlus2}) {
      const ElementDef elem = make_element(f, r, anisotropic_box());
      const PolyVec member = random_member(elem.space, rng);
      Eigen::VectorXd c;
      if (member.ncomp() == 1)
        c = local_interpolate(elem, ScalarField::from_poly(member));
      else
        c = local_interpolate(elem, VectorField::from_poly(member));
      const PolyVec recon = nodal_combination(elem, c);
      const double scale = std::max(member.max_abs_coef(), 1.0);
      CHECK((recon - member).max_abs_coef() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("curl-moment nodal functions are bubbles") {
  const ElementDef elem = make_element(Family::SPlus1, 2, Box3::reference());
  auto [v, u] = build_bubbles(2, Box3::reference());
  (void)u;
  std::vector<PolyVec> duals;
  for (int i = 0; i < elem.ndof(); ++i)
    if (elem.dofs[static_cast<std::size_t>(i)].kind == DofKind::face_curl_tangent_moment)
      duals.push_back(elem.nodal[static_cast<std::size_t>(i)]);
  REQUIRE(duals.size() == 12);
  CHECK(coefficient_rank_union(duals, v.basis) == 12);
}

TEST_CASE("interpolation of a gradient field is curl-free") {
  const ElementDef elem = make_element(Family::SPlus1, 2, Box3::reference());
  const PolyVec q = PolyVec::monomial(Box3::reference(), {1, 1, 1});
  const PolyVec g = q.grad();
  const Eigen::VectorXd c = local_interpolate(elem, VectorField::from_poly(g));
  const PolyVec recon = nodal_combination(elem, c);
  CHECK(recon.curl().max_abs_coef() < 1e-9);
  CHECK((recon - g).max_abs_coef() < 1e-9);
}

TEST_CASE("enriched interpolation splits into trimmed part plus bubble correction") {
  std::mt19937 rng(17);
  for (int r : {2, 3}) {
    const Box3 cell = anisotropic_box();
    const ElementDef full = make_element(Family::SPlus1, r, cell);
    const ElementDef trimmed = make_element(Family::S1, r, cell);
    const ElementDef bubbles = make_element(Family::VBubble, r, cell);
    for (int sample = 0; sample < 3; ++sample) {
      const PolyVec vp = random_smooth_poly(cell, r + 4, 3, rng);
      const VectorField v = VectorField::from_poly(vp);
      const PolyVec a = nodal_combination(full, local_interpolate(full, v));
      const PolyVec b = nodal_combination(trimmed, local_interpolate(trimmed, v));
      const PolyVec corr =
          nodal_combination(bubbles, local_interpolate(bubbles, field_minus_poly(v, b)));
      const double rel = (a - (b + corr)).l2_norm() / std::max(vp.l2_norm(), 1e-30);
      CHECK(rel < 1e-9);
    }
  }
}

TEST_CASE("bubble interpolations commute with curl") {
  std::mt19937 rng(19);
  for (int r : {2, 3}) {
    const Box3 cell = anisotropic_box();
    const ElementDef vb = make_element(Family::VBubble, r, cell);
    const ElementDef ub = make_element(Family::UBubble, r, cell);
    for (int sample = 0; sample < 3; ++sample) {
      const PolyVec wp = random_smooth_poly(cell, r + 4, 3, rng);
      const VectorField w = VectorField::from_poly(wp);
      VectorField curl_w;
      curl_w.value = w.curl;
      const PolyVec lhs = nodal_combination(ub, local_interpolate(ub, curl_w));
      const PolyVec rhs = nodal_combination(vb, local_interpolate(vb, w)).curl();
      const double rel = (lhs - rhs).l2_norm() / std::max(wp.curl().l2_norm(), 1e-30);
      CHECK(rel < 1e-9);
    }
  }
}

TEST_CASE("interpolation error decays at second order for r=2") {
  // L2 error of the canonical interpolant of a fixed smooth (degree-6)
  // field on a shrinking single cell.
  std::mt19937 rng(23);
  const PolyVec sample = random_smooth_poly(Box3({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}), 6, 3, rng);
  auto err_on = [&](double h) {
    const Box3 cell({h / 2, h / 2, h / 2}, {h / 2, h / 2, h / 2});
    const ElementDef elem = make_element(Family::SPlus1, 2, cell);
    const VectorField v = VectorField::from_poly(sample);
    const PolyVec recon = nodal_combination(elem, local_interpolate(elem, v));
    // L2 norm of (v - recon) over the small cell via quadrature
    const Quadrature rule = gauss_tensor(cell, 16);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Vec3 d = v.value(rule.points[i]) - recon.eval(rule.points[i]);
      acc += rule.weights[i] * d.dot(d);
    }
    return std::sqrt(acc);
  };
  // The single-cell L2(K) norm carries an extra h^{3/2} from the shrinking
  // domain, so second-order accuracy shows up as a slope near 3.5.
  const double e1 = err_on(0.5), e2 = err_on(0.25);
  const double rate = std::log2(e1 / e2);
  CHECK(rate > 3.1);
  CHECK(rate < 3.9);
}
