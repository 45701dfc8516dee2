// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/complexcheck.hpp"

#include <cmath>
#include <sstream>

#include "boxfem/linsolve.hpp"

namespace boxfem {

namespace {

PolyVec apply_diff(DiffKind op, const PolyVec& p) {
  switch (op) {
    case DiffKind::grad:
      return p.grad();
    case DiffKind::curl:
      return p.curl();
    case DiffKind::div:
      return p.div();
  }
  throw std::invalid_argument("apply_diff: unknown operator");
}

/// Columns of an orthonormal basis of the column span.
Eigen::MatrixXd image_basis(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(0) > 0.0 && sv(i) > rel_tol * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd extract(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(rows[i], cols[j]);
  return out;
}

std::vector<int> free_indices(const GlobalDofMap& map) {
  std::vector<int> idx;
  for (int i = 0; i < map.total; ++i)
    if (!map.constrained[static_cast<std::size_t>(i)]) idx.push_back(i);
  return idx;
}

struct RankInfo {
  int rank = 0;
  double gap = 0.0;
};

RankInfo checked_rank(const Eigen::MatrixXd& m) {
  RankInfo info;
  if (m.rows() == 0 || m.cols() == 0) {
    info.gap = std::numeric_limits<double>::infinity();
    return info;
  }
  info.rank = numerical_rank(m, 1e-8, &info.gap);
  if (info.gap < 1e3)
    throw NumericalDegeneracyError("exactness audit: rank decision not decisive (gap " +
                                   std::to_string(info.gap) + ")");
  return info;
}

}  // namespace

SparseMatrix operator_matrix(DiffKind op, const Mesh& mesh, const FeSpace& source,
                             const FeSpace& target) {
  // Local operator matrix on cell 0; identical on every cell by translation.
  const ElementDef& se = source.elem;
  const ElementDef& te = target.elem;
  const int ns = se.ndof(), nt = te.ndof();
  Eigen::MatrixXd local(nt, ns);
  std::vector<PolyVec> derivatives;
  derivatives.reserve(static_cast<std::size_t>(ns));
  double scale = 0.0;
  for (int j = 0; j < ns; ++j) {
    derivatives.push_back(apply_diff(op, se.nodal[static_cast<std::size_t>(j)]));
    scale = std::max(scale, derivatives.back().max_abs_coef());
  }
  scale = std::max(scale, 1e-300);
  for (int j = 0; j < ns; ++j) {
    const PolyVec& d = derivatives[static_cast<std::size_t>(j)];
    for (int i = 0; i < nt; ++i)
      local(i, j) = apply_dof(te.dofs[static_cast<std::size_t>(i)], te.cell, d, te.quad_degree);
    // Verify the derivative actually lies in the target space; the scale is
    // shared across the family so zero derivatives stay harmless.
    const PolyVec recon = nodal_combination(te, local.col(j));
    if ((recon - d).max_abs_coef() > 1e-9 * scale)
      throw ComplexStructureError(
          "operator_matrix: derivative escapes the target space (residual " +
          std::to_string((recon - d).max_abs_coef() / scale) + ")");
  }

  std::vector<Triplet> t;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& sd = source.map.cell_dofs[static_cast<std::size_t>(c)];
    const auto& ss = source.map.cell_signs[static_cast<std::size_t>(c)];
    const auto& td = target.map.cell_dofs[static_cast<std::size_t>(c)];
    const auto& ts = target.map.cell_signs[static_cast<std::size_t>(c)];
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < ns; ++j) {
        const double v = ts[static_cast<std::size_t>(i)] * ss[static_cast<std::size_t>(j)] * local(i, j);
        if (v != 0.0) t.push_back({td[static_cast<std::size_t>(i)], sd[static_cast<std::size_t>(j)], v});
      }
  }
  // Shared target DOFs are written by several cells with identical values;
  // average the duplicate contributions instead of summing them.
  std::vector<Triplet> dedup;
  {
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::size_t i = 0;
    while (i < t.size()) {
      std::size_t j = i;
      double sum = 0.0;
      while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col) sum += t[j++].value;
      dedup.push_back({t[i].row, t[i].col, sum / static_cast<double>(j - i)});
      i = j;
    }
  }
  return SparseMatrix::from_triplets(target.map.total, source.map.total, dedup);
}

ExactnessReport check_exactness(const Mesh& mesh, int r, Bc bc, bool enriched) {
  const Family f1 = enriched ? Family::SPlus1 : Family::S1;
  const Family f2 = enriched ? Family::SPlus2 : Family::S2;
  const FeSpace s0 = make_fe_space(mesh, Family::S0, r, bc);
  const FeSpace s1 = make_fe_space(mesh, f1, r, bc);
  const FeSpace s2 = make_fe_space(mesh, f2, r, bc);
  const FeSpace s3 = make_fe_space(mesh, Family::S3, r, bc);

  const Eigen::MatrixXd g_full = operator_matrix(DiffKind::grad, mesh, s0, s1).to_dense();
  const Eigen::MatrixXd c_full = operator_matrix(DiffKind::curl, mesh, s1, s2).to_dense();
  const Eigen::MatrixXd d_full = operator_matrix(DiffKind::div, mesh, s2, s3).to_dense();

  const auto i0 = free_indices(s0.map);
  const auto i1 = free_indices(s1.map);
  const auto i2 = free_indices(s2.map);
  const auto i3 = free_indices(s3.map);

  const Eigen::MatrixXd g = extract(g_full, i1, i0);
  const Eigen::MatrixXd c = extract(c_full, i2, i1);
  const Eigen::MatrixXd d = extract(d_full, i3, i2);

  ExactnessReport rep;
  auto max_abs = [](const Eigen::MatrixXd& m) {
    return (m.size() == 0) ? 0.0 : m.cwiseAbs().maxCoeff();
  };
  const double gs = std::max(max_abs(g), 1e-300);
  const double cs = std::max(max_abs(c), 1e-300);
  const double ds = std::max(max_abs(d), 1e-300);
  const double cg = max_abs(c * g), dc = max_abs(d * c);
  rep.comp_zero_curl_grad = (cg == 0.0) ? 0.0 : cg / (cs * gs);
  rep.comp_zero_div_curl = (dc == 0.0) ? 0.0 : dc / (ds * cs);

  const RankInfo rg = checked_rank(g);
  const RankInfo rc = checked_rank(c);
  const RankInfo rd = checked_rank(d);

  const int dim0 = static_cast<int>(i0.size());
  const int dim1 = static_cast<int>(i1.size());
  const int dim2 = static_cast<int>(i2.size());
  const int dim3 = static_cast<int>(i3.size()) - (s3.map.mean_constraint ? 1 : 0);

  SlotReport sl0{family_name(Family::S0), dim0, rg.rank, dim0 - rg.rank, 0, false};
  // kernel of grad: constants without bc, zero with bc
  sl0.pass = (sl0.kernel_dim == (bc == Bc::homogeneous ? 0 : 1));

  SlotReport sl1{family_name(f1), dim1, rc.rank, dim1 - rc.rank, rg.rank, false};
  sl1.pass = (sl1.kernel_dim == sl1.image_in_dim);
  if (sl1.pass && dim1 > 0) {
    // stacked-rank confirmation that the two subspaces coincide
    const Eigen::MatrixXd ker = kernel_basis(c, 1e-8);
    const Eigen::MatrixXd img = image_basis(g, 1e-8);
    Eigen::MatrixXd both(dim1, ker.cols() + img.cols());
    both << ker, img;
    sl1.pass = (numerical_rank(both, 1e-8) == static_cast<int>(ker.cols()));
  }

  SlotReport sl2{family_name(f2), dim2, rd.rank, dim2 - rd.rank, rc.rank, false};
  sl2.pass = (sl2.kernel_dim == sl2.image_in_dim);
  if (sl2.pass && dim2 > 0) {
    const Eigen::MatrixXd ker = kernel_basis(d, 1e-8);
    const Eigen::MatrixXd img = image_basis(c, 1e-8);
    Eigen::MatrixXd both(dim2, ker.cols() + img.cols());
    both << ker, img;
    sl2.pass = (numerical_rank(both, 1e-8) == static_cast<int>(ker.cols()));
  }

  // Last slot: the outgoing operator is the zero map, so its kernel is the
  // whole space and exactness means the incoming operator is onto.
  SlotReport sl3{family_name(Family::S3), dim3, 0, dim3, rd.rank, false};
  sl3.pass = (rd.rank == dim3);

  rep.slots = {sl0, sl1, sl2, sl3};
  rep.alternating_sum = dim0 - dim1 + dim2 - dim3;
  rep.expected_alternating_sum = (bc == Bc::homogeneous) ? 0 : 1;
  rep.pass = sl0.pass && sl1.pass && sl2.pass && sl3.pass &&
             rep.alternating_sum == rep.expected_alternating_sum &&
             rep.comp_zero_curl_grad <= 1e-10 && rep.comp_zero_div_curl <= 1e-10;
  return rep;
}

std::string ExactnessReport::table() const {
  std::ostringstream os;
  os << "slot        dim   rank  kernel image  verdict\n";
  for (const auto& s : slots) {
    os.width(10);
    os << std::left << s.name << std::right;
    os.width(6);
    os << s.dim;
    os.width(7);
    os << s.out_rank;
    os.width(7);
    os << s.kernel_dim;
    os.width(7);
    os << s.image_in_dim;
    os << (s.pass ? "   pass" : "   FAIL") << "\n";
  }
  os << "composition |curl.grad| = " << comp_zero_curl_grad
     << ", |div.curl| = " << comp_zero_div_curl << "\n";
  os << "alternating sum = " << alternating_sum << " (expected " << expected_alternating_sum
     << ")\n";
  os << "exactness: " << (pass ? "pass" : "FAIL") << "\n";
  return os.str();
}

std::string ExactnessReport::csv() const {
  std::ostringstream os;
  os << "slot,dim,rank,kernel,image,verdict\n";
  for (const auto& s : slots)
    os << s.name << "," << s.dim << "," << s.out_rank << "," << s.kernel_dim << ","
       << s.image_in_dim << "," << (s.pass ? "pass" : "fail") << "\n";
  return os.str();
}

double CommutingReport::max() const {
  return std::max(std::max(div_enriched, div_conforming), std::max(enriched_split, bubble_commute));
}

CommutingReport check_commuting(const Mesh& mesh, int r, const std::vector<VectorField>& samples) {
  const FeSpace sp2 = make_fe_space(mesh, Family::SPlus2, r, Bc::none);
  const FeSpace s2 = make_fe_space(mesh, Family::S2, r, Bc::none);
  const FeSpace s3 = make_fe_space(mesh, Family::S3, r, Bc::none);
  const FeSpace sp1 = make_fe_space(mesh, Family::SPlus1, r, Bc::none);
  const FeSpace s1 = make_fe_space(mesh, Family::S1, r, Bc::none);
  const FeSpace vb = make_fe_space(mesh, Family::VBubble, r, Bc::none);
  const FeSpace ub = make_fe_space(mesh, Family::UBubble, r, Bc::none);

  CommutingReport rep;
  const int qdeg = 2 * r + 12;

  for (const auto& v : samples) {
    if (!v.div) throw std::invalid_argument("check_commuting: sample lacks a div callback");
    double num_e = 0.0, num_c = 0.0, den_div = 0.0;
    double num_split = 0.0, den_split = 0.0;
    double num_bub = 0.0, den_bub = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Box3 box = mesh.cell_box(c);
      const Quadrature rule = gauss_tensor(box, qdeg);

      const ElementDef e_sp2 = translate_element(sp2.elem, box);
      const ElementDef e_s2 = translate_element(s2.elem, box);
      const ElementDef e_s3 = translate_element(s3.elem, box);
      const PolyVec div_sp2 = nodal_combination(e_sp2, local_interpolate(e_sp2, v)).div();
      const PolyVec div_s2 = nodal_combination(e_s2, local_interpolate(e_s2, v)).div();
      ScalarField divv;
      divv.value = v.div;
      const PolyVec proj_div = nodal_combination(e_s3, local_interpolate(e_s3, divv));

      const ElementDef e_sp1 = translate_element(sp1.elem, box);
      const ElementDef e_s1 = translate_element(s1.elem, box);
      const ElementDef e_vb = translate_element(vb.elem, box);
      const ElementDef e_ub = translate_element(ub.elem, box);
      const PolyVec full = nodal_combination(e_sp1, local_interpolate(e_sp1, v));
      const PolyVec trimmed = nodal_combination(e_s1, local_interpolate(e_s1, v));
      VectorField resid;
      {
        const VectorField t = VectorField::from_poly(trimmed);
        resid.value = [v, t](const Vec3& x) { return v.value(x) - t.value(x); };
        resid.curl = [v, t](const Vec3& x) { return v.curl(x) - t.curl(x); };
      }
      const PolyVec corr = nodal_combination(e_vb, local_interpolate(e_vb, resid));

      VectorField curlv;
      curlv.value = v.curl;
      const PolyVec lhs_bub = nodal_combination(e_ub, local_interpolate(e_ub, curlv));
      const PolyVec rhs_bub = nodal_combination(e_vb, local_interpolate(e_vb, v)).curl();

      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3& x = rule.points[q];
        const double w = rule.weights[q];
        const double dv = v.div(x);
        const double pd = proj_div.eval_scalar(x);
        num_e += w * std::pow(div_sp2.eval_scalar(x) - pd, 2);
        num_c += w * std::pow(div_s2.eval_scalar(x) - pd, 2);
        den_div += w * dv * dv;
        const Vec3 ds = full.eval(x) - trimmed.eval(x) - corr.eval(x);
        num_split += w * ds.dot(ds);
        const Vec3 vv = v.value(x);
        den_split += w * vv.dot(vv);
        const Vec3 db = lhs_bub.eval(x) - rhs_bub.eval(x);
        num_bub += w * db.dot(db);
        const Vec3 cw = v.curl(x);
        den_bub += w * cw.dot(cw);
      }
    }
    // Divergence-free samples make ||div v|| vanish; fall back to the curl
    // scale so the relative residual stays meaningful.
    const double den_d = std::max({den_div, den_bub, 1e-300});
    rep.div_enriched = std::max(rep.div_enriched, std::sqrt(num_e / den_d));
    rep.div_conforming = std::max(rep.div_conforming, std::sqrt(num_c / den_d));
    rep.enriched_split =
        std::max(rep.enriched_split, std::sqrt(num_split / std::max(den_split, 1e-300)));
    rep.bubble_commute = std::max(rep.bubble_commute, std::sqrt(num_bub / std::max(den_bub, 1e-300)));
  }
  return rep;
}

}  // namespace boxfem
