// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/spaces.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace boxfem {

namespace {

int dim_poly(int k, int nvars) {
  // dim P_k in nvars variables; 0 for k < 0
  if (k < 0) return 0;
  if (nvars == 1) return k + 1;
  if (nvars == 2) return (k + 1) * (k + 2) / 2;
  return (k + 1) * (k + 2) * (k + 3) / 6;
}

void check_order(Family f, int r) {
  const int rmin = (f == Family::S0) ? 1 : 2;
  if (r < rmin) throw std::invalid_argument("build_space: order out of range for " + family_name(f));
}

/// Rows of the stacked matrix normalized to unit norm; zero rows removed.
Eigen::MatrixXd normalized_rows(const StackedPolys& s) {
  Eigen::MatrixXd m(s.rows.rows(), s.rows.cols());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < s.rows.rows(); ++i) {
    const double n = s.rows.row(i).norm();
    if (n == 0.0) continue;
    m.row(k++) = s.rows.row(i) / n;
  }
  return m.topRows(k);
}

std::vector<PolyVec> twist_generators(const Box3& cell, int r) {
  // (x2 x3 (w2 - w3), x3 x1 (w3 - w1), x1 x2 (w1 - w2)) with each w_i a
  // homogeneous polynomial of degree r-1 not involving variable i. Only one
  // slot is populated per generator; redundancy with the other summands is
  // removed later by the rank reduction.
  std::vector<PolyVec> out;
  const PolyVec x = PolyVec::position(cell);
  for (int slot = 0; slot < 3; ++slot) {
    for (const auto& m : monomials_homogeneous(r - 1)) {
      if (m.e[static_cast<std::size_t>(slot)] != 0) continue;
      const PolyVec w = PolyVec::monomial(cell, m);
      std::array<PolyVec, 3> ws = {PolyVec::zero(1, cell), PolyVec::zero(1, cell),
                                   PolyVec::zero(1, cell)};
      ws[static_cast<std::size_t>(slot)] = w;
      PolyVec gen = PolyVec::zero(3, cell);
      for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        PolyVec comp = x.component(b).multiply(x.component(c)).multiply(
            ws[static_cast<std::size_t>(b)] - ws[static_cast<std::size_t>(c)]);
        gen = gen + PolyVec::embed(comp, a, 3);
      }
      out.push_back(gen);
    }
  }
  return out;
}

std::vector<PolyVec> s1_generators(const Box3& cell, int r) {
  std::vector<PolyVec> gens;
  for (const auto& m : monomials_superlinear(r)) {
    PolyVec g = PolyVec::monomial(cell, m).grad();
    if (!g.is_zero()) gens.push_back(g);
  }
  const PolyVec x = PolyVec::position(cell);
  for (int comp = 0; comp < 3; ++comp)
    for (const auto& m : monomials_total_degree(r - 1))
      gens.push_back(PolyVec::embed(PolyVec::monomial(cell, m), comp, 3).cross(x));
  for (auto& t : twist_generators(cell, r)) gens.push_back(std::move(t));
  return gens;
}

std::vector<PolyVec> s2_generators(const Box3& cell, int r) {
  std::vector<PolyVec> gens;
  for (int comp = 0; comp < 3; ++comp)
    for (const auto& m : monomials_total_degree(r - 1))
      gens.push_back(PolyVec::embed(PolyVec::monomial(cell, m), comp, 3));
  for (auto& t : twist_generators(cell, r)) gens.push_back(t.curl());
  return gens;
}

std::vector<PolyVec> l2_orthonormalize(const std::vector<PolyVec>& basis) {
  if (basis.empty()) return basis;
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      gram(i, j) = basis[static_cast<std::size_t>(i)].inner(basis[static_cast<std::size_t>(j)]);
      gram(j, i) = gram(i, j);
    }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericalDegeneracyError("l2_orthonormalize: Gram matrix not positive definite");
  StackedPolys s = stack_polys(basis);
  Eigen::MatrixXd rows = llt.matrixL().solve(s.rows);
  std::vector<PolyVec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(unstack_row(s, rows.row(i)));
  return out;
}

SpaceBasis make_space(Family f, int r, const Box3& cell, std::vector<PolyVec> basis) {
  SpaceBasis s;
  s.family = f;
  s.order = r;
  s.cell = cell;
  s.basis = std::move(basis);
  const int expect = space_dimension(f, r);
  if (s.dim() != expect)
    throw NumericalDegeneracyError(family_name(f) + ": basis dimension " + std::to_string(s.dim()) +
                                   " != expected " + std::to_string(expect));
  return s;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::S0:
      return "S0";
    case Family::S1:
      return "S1";
    case Family::S2:
      return "S2";
    case Family::S3:
      return "S3";
    case Family::SPlus1:
      return "SPlus1";
    case Family::SPlus2:
      return "SPlus2";
    case Family::VBubble:
      return "VBubble";
    case Family::UBubble:
      return "UBubble";
  }
  return "?";
}

int space_dimension(Family f, int r) {
  switch (f) {
    case Family::S0:
      if (r == 1) return 8;
      if (r == 2) return 20;
      return (r + 1) * (r * r + 5 * r + 24) / 6;
    case Family::S1:
      if (r == 2) return 36;
      return (r * r * r + 5 * r * r + 18 * r + 6) / 2;
    case Family::S2:
      return r * (r * r + 3 * r + 8) / 2;
    case Family::S3:
      return dim_poly(r - 2, 3);
    case Family::SPlus1:
      return space_dimension(Family::S1, r) + 6 * r * (r - 1);
    case Family::SPlus2:
      return space_dimension(Family::S2, r) + 6 * r * (r - 1);
    case Family::VBubble:
    case Family::UBubble:
      return 6 * r * (r - 1);
  }
  return 0;
}

std::vector<double> legendre_coefficients(int k) {
  std::vector<std::vector<double>> p(static_cast<std::size_t>(std::max(k + 1, 2)));
  p[0] = {1.0};
  p[1] = {0.0, 1.0};
  for (int n = 2; n <= k; ++n) {
    std::vector<double> cur(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t i = 0; i < p[static_cast<std::size_t>(n - 1)].size(); ++i)
      cur[i + 1] += (2.0 * n - 1.0) / n * p[static_cast<std::size_t>(n - 1)][i];
    for (std::size_t i = 0; i < p[static_cast<std::size_t>(n - 2)].size(); ++i)
      cur[i] -= (n - 1.0) / n * p[static_cast<std::size_t>(n - 2)][i];
    p[static_cast<std::size_t>(n)] = cur;
  }
  return p[static_cast<std::size_t>(k)];
}

std::vector<PolyVec> reduce_to_basis(const std::vector<PolyVec>& generators, double rel_tol) {
  if (generators.empty()) return {};
  StackedPolys s = stack_polys(generators);
  Eigen::MatrixXd g = normalized_rows(s);
  // Column-pivoted QR of the transpose: the leading rank columns of Q span
  // the row space of g.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g.transpose());
  const Eigen::MatrixXd r = qr.matrixR();
  const double pivot0 = std::abs(r(0, 0));
  int rank = 0;
  const int kmax = static_cast<int>(std::min(r.rows(), r.cols()));
  for (int k = 0; k < kmax; ++k) {
    if (std::abs(r(k, k)) > rel_tol * pivot0) ++rank;
  }
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.cols(), rank);
  std::vector<PolyVec> out;
  out.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    PolyVec p = unstack_row(s, q.col(i));
    out.push_back(std::move(p));
  }
  return out;
}

int coefficient_rank(const std::vector<PolyVec>& polys, double rel_tol) {
  if (polys.empty()) return 0;
  // One global scaling only: per-row normalization would promote
  // roundoff-level rows (mathematically zero) to full directions.
  Eigen::MatrixXd g = stack_polys(polys).rows;
  const double scale = g.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0;
  g /= scale;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

int coefficient_rank_union(const std::vector<PolyVec>& a, const std::vector<PolyVec>& b,
                           double rel_tol) {
  std::vector<PolyVec> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return coefficient_rank(all, rel_tol);
}

PolyVec cell_bubble(const Box3& cell) {
  PolyVec b = PolyVec::constant(cell, 1.0);
  for (int a = 0; a < 3; ++a) {
    const double h2 = cell.halfwidth[a] * cell.halfwidth[a];
    MonoIndex sq;
    sq.e[static_cast<std::size_t>(a)] = 2;
    PolyVec factor = PolyVec::constant(cell, h2) - PolyVec::monomial(cell, sq) * h2;
    b = b.multiply(factor);
  }
  return b;
}

PolyVec face_bubble(const Box3& cell, int face) {
  const int a = face_axis(face);
  PolyVec b = PolyVec::constant(cell, 1.0);
  for (int i = 0; i < 3; ++i) {
    if (i == a) continue;
    const double h2 = cell.halfwidth[i] * cell.halfwidth[i];
    MonoIndex sq;
    sq.e[static_cast<std::size_t>(i)] = 2;
    b = b.multiply(PolyVec::constant(cell, h2) - PolyVec::monomial(cell, sq) * h2);
  }
  // Remaining linear factor of B_K on this axis: the one not vanishing on
  // the face. High face: (x_a - c_a + h_a) = h_a (1 + xi_a); low face:
  // (c_a + h_a - x_a) = h_a (1 - xi_a).
  MonoIndex lin;
  lin.e[static_cast<std::size_t>(a)] = 1;
  const double h = cell.halfwidth[a];
  const double sgn = (face_side(face) == 1) ? 1.0 : -1.0;
  PolyVec factor = PolyVec::constant(cell, h) + PolyVec::monomial(cell, lin) * (sgn * h);
  return b.multiply(factor);
}

std::pair<SpaceBasis, SpaceBasis> build_bubbles(int r, const Box3& cell) {
  if (r < 2) throw std::invalid_argument("build_bubbles: requires r >= 2");
  const PolyVec bk = cell_bubble(cell);

  SpaceBasis v, u;
  v.family = Family::VBubble;
  u.family = Family::UBubble;
  v.order = u.order = r;
  v.cell = u.cell = cell;

  for (int face = 0; face < 6; ++face) {
    const int a = face_axis(face);
    const int t1 = (a + 1) % 3, t2 = (a + 2) % 3;
    const PolyVec bf = face_bubble(cell, face);
    const PolyVec bkbf = bk.multiply(bf);

    std::vector<PolyVec> qs, ws;
    for (int t : {t1, t2}) {
      for (const auto& m : monomials_total_degree(r - 2))
        qs.push_back(PolyVec::embed(PolyVec::monomial(cell, m), t, 3));
      for (const auto& m : monomials_total_degree(r - 3))
        ws.push_back(PolyVec::embed(PolyVec::monomial(cell, m), t, 3));
    }

    // Null space of the moment matrix M_ij = (q_j, B_K B_f w_i)_K, computed
    // with exact monomial integration.
    const int nq = static_cast<int>(qs.size());
    const int nw = static_cast<int>(ws.size());
    Eigen::MatrixXd kernel;
    if (nw == 0) {
      kernel = Eigen::MatrixXd::Identity(nq, nq);
    } else {
      Eigen::MatrixXd m(nw, nq);
      for (int i = 0; i < nw; ++i)
        for (int j = 0; j < nq; ++j)
          m(i, j) = qs[static_cast<std::size_t>(j)]
                        .dot(ws[static_cast<std::size_t>(i)])
                        .multiply(bkbf)
                        .integral()(0);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * sv(0)) ++rank;
      kernel = svd.matrixV().rightCols(nq - rank);
    }
    if (kernel.cols() != r * (r - 1))
      throw NumericalDegeneracyError("build_bubbles: face null space has dimension " +
                                     std::to_string(kernel.cols()) + ", expected " +
                                     std::to_string(r * (r - 1)));

    for (Eigen::Index col = 0; col < kernel.cols(); ++col) {
      PolyVec q = PolyVec::zero(3, cell);
      for (int j = 0; j < nq; ++j)
        if (kernel(j, col) != 0.0) q = q + qs[static_cast<std::size_t>(j)] * kernel(j, col);
      PolyVec zb = PolyVec::embed(bkbf.multiply(q.component(t1)), t1, 3) +
                   PolyVec::embed(bkbf.multiply(q.component(t2)), t2, 3);
      const double scale = 1.0 / zb.l2_norm();
      zb *= scale;
      q *= scale;
      PolyVec ub = zb.curl();
      v.basis.push_back(zb);
      v.bubble.push_back({face, q});
      u.basis.push_back(ub);
      u.bubble.push_back({face, q});
    }
  }

  if (coefficient_rank(v.basis) != 6 * r * (r - 1))
    throw NumericalDegeneracyError("build_bubbles: V basis is rank deficient");
  if (v.dim() != space_dimension(Family::VBubble, r))
    throw NumericalDegeneracyError("build_bubbles: unexpected V dimension");
  return {v, u};
}

SpaceBasis build_space(Family f, int r, const Box3& cell) {
  check_order(f, r);
  switch (f) {
    case Family::S0: {
      std::vector<PolyVec> basis;
      for (const auto& m : monomials_superlinear(r)) basis.push_back(PolyVec::monomial(cell, m));
      return make_space(f, r, cell, l2_orthonormalize(basis));
    }
    case Family::S1:
      return make_space(f, r, cell, l2_orthonormalize(reduce_to_basis(s1_generators(cell, r))));
    case Family::S2:
      return make_space(f, r, cell, l2_orthonormalize(reduce_to_basis(s2_generators(cell, r))));
    case Family::S3: {
      // Tensor Legendre products of total degree <= r-2; the first member is
      // the constant 1.
      std::vector<PolyVec> basis;
      for (const auto& m : monomials_total_degree(r - 2)) {
        PolyVec p = PolyVec::constant(cell, 1.0);
        for (int a = 0; a < 3; ++a) {
          const auto lc = legendre_coefficients(m.e[static_cast<std::size_t>(a)]);
          PolyVec axis_poly = PolyVec::zero(1, cell);
          for (std::size_t k = 0; k < lc.size(); ++k) {
            if (lc[k] == 0.0) continue;
            MonoIndex mi;
            mi.e[static_cast<std::size_t>(a)] = static_cast<int>(k);
            axis_poly = axis_poly + PolyVec::monomial(cell, mi) * lc[k];
          }
          p = p.multiply(axis_poly);
        }
        basis.push_back(p);
      }
      return make_space(f, r, cell, std::move(basis));
    }
    case Family::SPlus1: {
      SpaceBasis s1 = build_space(Family::S1, r, cell);
      auto [v, u] = build_bubbles(r, cell);
      (void)u;
      SpaceBasis s;
      s.family = f;
      s.order = r;
      s.cell = cell;
      s.basis = std::move(s1.basis);
      s.enrichment_offset = static_cast<int>(s.basis.size());
      s.basis.insert(s.basis.end(), v.basis.begin(), v.basis.end());
      if (coefficient_rank(s.basis) != space_dimension(f, r))
        throw NumericalDegeneracyError("SPlus1: enriched basis is rank deficient");
      return s;
    }
    case Family::SPlus2: {
      SpaceBasis s2 = build_space(Family::S2, r, cell);
      auto [v, u] = build_bubbles(r, cell);
      (void)v;
      SpaceBasis s;
      s.family = f;
      s.order = r;
      s.cell = cell;
      s.basis = std::move(s2.basis);
      s.enrichment_offset = static_cast<int>(s.basis.size());
      s.basis.insert(s.basis.end(), u.basis.begin(), u.basis.end());
      if (coefficient_rank(s.basis) != space_dimension(f, r))
        throw NumericalDegeneracyError("SPlus2: enriched basis is rank deficient");
      return s;
    }
    case Family::VBubble:
      return build_bubbles(r, cell).first;
    case Family::UBubble:
      return build_bubbles(r, cell).second;
  }
  throw std::invalid_argument("build_space: unknown family");
}

}  // namespace boxfem
