// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/assembly.hpp"

#include <cmath>

namespace boxfem {

namespace {

int default_pair_degree(const ElementDef& a, const ElementDef& b) {
  return 2 * std::max(a.order, b.order) + 12;
}

Eigen::MatrixXd weighted_product(const Eigen::MatrixXd& test, const Eigen::MatrixXd& trial,
                                 const Eigen::VectorXd& w) {
  return test.transpose() * w.asDiagonal() * trial;
}

/// Accumulate the contraction of matching channels.
Eigen::MatrixXd contract(const FormSpec& form, const ElementTab& trial, const ElementTab& test,
                         const Eigen::VectorXd& w) {
  switch (form.kind) {
    case FormKind::mass: {
      if (trial.scalar.size() > 0) return weighted_product(test.scalar, trial.scalar, w);
      Eigen::MatrixXd m = weighted_product(test.value[0], trial.value[0], w);
      for (int c = 1; c < 3; ++c) m += weighted_product(test.value[c], trial.value[c], w);
      return m;
    }
    case FormKind::curl_mass: {
      Eigen::MatrixXd m = weighted_product(test.curl[0], trial.curl[0], w);
      for (int c = 1; c < 3; ++c) m += weighted_product(test.curl[c], trial.curl[c], w);
      return m;
    }
    case FormKind::gradcurl_stiffness: {
      Eigen::MatrixXd m = weighted_product(test.grad_curl[0][0], trial.grad_curl[0][0], w);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == 0 && j == 0) continue;
          m += weighted_product(test.grad_curl[i][j], trial.grad_curl[i][j], w);
        }
      return m;
    }
    case FormKind::grad_stiffness: {
      if (trial.scalar_grad[0].size() > 0) {
        Eigen::MatrixXd m = weighted_product(test.scalar_grad[0], trial.scalar_grad[0], w);
        for (int c = 1; c < 3; ++c)
          m += weighted_product(test.scalar_grad[c], trial.scalar_grad[c], w);
        return m;
      }
      Eigen::MatrixXd m = weighted_product(test.grad[0][0], trial.grad[0][0], w);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == 0 && j == 0) continue;
          m += weighted_product(test.grad[i][j], trial.grad[i][j], w);
        }
      return m;
    }
    case FormKind::div_div:
      return weighted_product(test.div, trial.div, w);
    case FormKind::b1_v_gradq: {
      // (v, grad q): trial scalar, test vector
      Eigen::MatrixXd m = weighted_product(test.value[0], trial.scalar_grad[0], w);
      for (int c = 1; c < 3; ++c) m += weighted_product(test.value[c], trial.scalar_grad[c], w);
      return m;
    }
    case FormKind::b2_divv_q:
      // (div v, q): trial vector, test scalar
      return weighted_product(test.scalar, trial.div, w);
    case FormKind::load:
      throw std::invalid_argument("local_matrix: load is not a bilinear form");
  }
  throw std::invalid_argument("local_matrix: unknown form");
}

unsigned trial_channels(FormKind k, bool scalar_space) {
  switch (k) {
    case FormKind::mass:
      return TabValue;
    case FormKind::curl_mass:
      return TabCurl;
    case FormKind::gradcurl_stiffness:
      return TabGradCurl;
    case FormKind::grad_stiffness:
      return scalar_space ? TabScalarGrad : TabGrad;
    case FormKind::div_div:
      return TabDiv;
    case FormKind::b1_v_gradq:
      return scalar_space ? TabScalarGrad : TabValue;
    case FormKind::b2_divv_q:
      return scalar_space ? TabValue : TabDiv;
    default:
      return TabValue;
  }
}

}  // namespace

FeSpace make_fe_space(const Mesh& mesh, Family f, int r, Bc bc, int quad_degree) {
  FeSpace s;
  s.family = f;
  s.order = r;
  s.bc = bc;
  s.elem = make_element(f, r, mesh.cell_box(0), quad_degree);
  s.map = global_dofs(mesh, f, r, bc);
  return s;
}

ElementTab tabulate_element(const ElementDef& elem, const Quadrature& rule, unsigned channels) {
  const int n = elem.ndof();
  const int npts = static_cast<int>(rule.size());
  const bool scalar_space = elem.nodal.front().ncomp() == 1;
  ElementTab tab;

  std::vector<PolyVec> curls, divs;
  if (channels & (TabCurl | TabGradCurl)) {
    curls.reserve(static_cast<std::size_t>(n));
    for (const auto& p : elem.nodal) curls.push_back(p.curl());
  }
  if (channels & TabDiv) {
    divs.reserve(static_cast<std::size_t>(n));
    for (const auto& p : elem.nodal) divs.push_back(p.div());
  }

  auto alloc3 = [&](std::array<Eigen::MatrixXd, 3>& a) {
    for (auto& m : a) m = Eigen::MatrixXd::Zero(npts, n);
  };
  if ((channels & TabValue) && !scalar_space) alloc3(tab.value);
  if ((channels & TabValue) && scalar_space) tab.scalar = Eigen::MatrixXd::Zero(npts, n);
  if (channels & TabCurl) alloc3(tab.curl);
  if (channels & TabScalarGrad) alloc3(tab.scalar_grad);
  if (channels & TabDiv) tab.div = Eigen::MatrixXd::Zero(npts, n);
  if (channels & TabGrad)
    for (auto& row : tab.grad) alloc3(row);
  if (channels & TabGradCurl)
    for (auto& row : tab.grad_curl) alloc3(row);

  std::vector<PolyVec> partials, curl_partials, scalar_grads;
  if (channels & TabGrad)
    for (const auto& p : elem.nodal)
      for (int j = 0; j < 3; ++j) partials.push_back(p.partial(j));
  if (channels & TabGradCurl)
    for (const auto& p : curls)
      for (int j = 0; j < 3; ++j) curl_partials.push_back(p.partial(j));
  if (channels & TabScalarGrad)
    for (const auto& p : elem.nodal) scalar_grads.push_back(p.grad());

  for (int q = 0; q < npts; ++q) {
    const Vec3& x = rule.points[static_cast<std::size_t>(q)];
    for (int j = 0; j < n; ++j) {
      const auto& phi = elem.nodal[static_cast<std::size_t>(j)];
      if (channels & TabValue) {
        const Vec3 v = phi.eval(x);
        if (scalar_space)
          tab.scalar(q, j) = v[0];
        else
          for (int c = 0; c < 3; ++c) tab.value[static_cast<std::size_t>(c)](q, j) = v[c];
      }
      if (channels & TabCurl) {
        const Vec3 v = curls[static_cast<std::size_t>(j)].eval(x);
        for (int c = 0; c < 3; ++c) tab.curl[static_cast<std::size_t>(c)](q, j) = v[c];
      }
      if (channels & TabDiv) tab.div(q, j) = divs[static_cast<std::size_t>(j)].eval(x)[0];
      if (channels & TabGrad)
        for (int dj = 0; dj < 3; ++dj) {
          const Vec3 col = partials[static_cast<std::size_t>(j * 3 + dj)].eval(x);
          for (int c = 0; c < 3; ++c)
            tab.grad[static_cast<std::size_t>(c)][static_cast<std::size_t>(dj)](q, j) = col[c];
        }
      if (channels & TabGradCurl)
        for (int dj = 0; dj < 3; ++dj) {
          const Vec3 col = curl_partials[static_cast<std::size_t>(j * 3 + dj)].eval(x);
          for (int c = 0; c < 3; ++c)
            tab.grad_curl[static_cast<std::size_t>(c)][static_cast<std::size_t>(dj)](q, j) = col[c];
        }
      if (channels & TabScalarGrad) {
        const Vec3 g = scalar_grads[static_cast<std::size_t>(j)].eval(x);
        for (int c = 0; c < 3; ++c) tab.scalar_grad[static_cast<std::size_t>(c)](q, j) = g[c];
      }
    }
  }
  return tab;
}

Eigen::MatrixXd local_matrix(const FormSpec& form, const ElementDef& trial, const ElementDef& test,
                             int quad_degree) {
  if (quad_degree < 0) quad_degree = default_pair_degree(trial, test);
  const Quadrature rule = gauss_tensor(test.cell, quad_degree);
  Eigen::VectorXd w(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) w(static_cast<Eigen::Index>(i)) = rule.weights[i];

  const bool trial_scalar = trial.nodal.front().ncomp() == 1;
  const bool test_scalar = test.nodal.front().ncomp() == 1;
  const ElementTab ttrial = tabulate_element(trial, rule, trial_channels(form.kind, trial_scalar));
  const ElementTab ttest = tabulate_element(
      test, rule,
      form.kind == FormKind::b1_v_gradq ? TabValue
      : form.kind == FormKind::b2_divv_q ? TabValue
                                         : trial_channels(form.kind, test_scalar));
  return form.coefficient * contract(form, ttrial, ttest, w);
}

void assemble_forms(std::vector<Triplet>& out, const std::vector<FormSpec>& forms, const Mesh& mesh,
                    const FeSpace& trial, const FeSpace& test, int row_offset, int col_offset,
                    int quad_degree) {
  Eigen::MatrixXd local =
      Eigen::MatrixXd::Zero(test.elem.ndof(), trial.elem.ndof());
  for (const auto& form : forms) local += local_matrix(form, trial.elem, test.elem, quad_degree);

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& rd = test.map.cell_dofs[static_cast<std::size_t>(c)];
    const auto& rs = test.map.cell_signs[static_cast<std::size_t>(c)];
    const auto& cd = trial.map.cell_dofs[static_cast<std::size_t>(c)];
    const auto& cs = trial.map.cell_signs[static_cast<std::size_t>(c)];
    for (int i = 0; i < local.rows(); ++i)
      for (int j = 0; j < local.cols(); ++j) {
        const double v = local(i, j) * rs[static_cast<std::size_t>(i)] * cs[static_cast<std::size_t>(j)];
        if (v != 0.0)
          out.push_back({row_offset + rd[static_cast<std::size_t>(i)],
                         col_offset + cd[static_cast<std::size_t>(j)], v});
      }
  }
}

namespace {

template <class Field>
Eigen::VectorXd assemble_load_impl(const Field& f, const Mesh& mesh, const FeSpace& space,
                                   int oversample) {
  const int qdeg = 2 * space.elem.order + 8 + oversample;
  const Quadrature ref_rule = gauss_tensor(space.elem.cell, qdeg);
  const unsigned channels = TabValue;
  const ElementTab tab = tabulate_element(space.elem, ref_rule, channels);
  const bool scalar_space = space.elem.nodal.front().ncomp() == 1;
  const int n = space.elem.ndof();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.map.total);
  const Box3 cell0 = space.elem.cell;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Box3 box = mesh.cell_box(c);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < ref_rule.size(); ++q) {
      const Vec3 xref = ref_rule.points[q];
      const Vec3 x = box.to_physical(cell0.to_local(xref));
      const double w = ref_rule.weights[q];
      if constexpr (std::is_same_v<Field, VectorField>) {
        const Vec3 fv = f.value(x);
        for (int comp = 0; comp < 3; ++comp)
          local += (w * fv[comp]) *
                   tab.value[static_cast<std::size_t>(comp)].row(static_cast<Eigen::Index>(q)).transpose();
      } else {
        (void)scalar_space;
        local += (w * f.value(x)) * tab.scalar.row(static_cast<Eigen::Index>(q)).transpose();
      }
    }
    const auto& rd = space.map.cell_dofs[static_cast<std::size_t>(c)];
    const auto& rsg = space.map.cell_signs[static_cast<std::size_t>(c)];
    for (int i = 0; i < n; ++i)
      rhs(rd[static_cast<std::size_t>(i)]) += rsg[static_cast<std::size_t>(i)] * local(i);
  }
  return rhs;
}

}  // namespace

Eigen::VectorXd assemble_load(const VectorField& f, const Mesh& mesh, const FeSpace& space,
                              int oversample) {
  return assemble_load_impl(f, mesh, space, oversample);
}

Eigen::VectorXd assemble_load(const ScalarField& f, const Mesh& mesh, const FeSpace& space,
                              int oversample) {
  return assemble_load_impl(f, mesh, space, oversample);
}

Eigen::VectorXd assemble_moments(const Mesh& mesh, const FeSpace& space) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(space.map.total);
  Eigen::VectorXd local(space.elem.ndof());
  for (int i = 0; i < space.elem.ndof(); ++i)
    local(i) = space.elem.nodal[static_cast<std::size_t>(i)].integral()(0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& rd = space.map.cell_dofs[static_cast<std::size_t>(c)];
    const auto& rs = space.map.cell_signs[static_cast<std::size_t>(c)];
    for (int i = 0; i < local.size(); ++i)
      m(rd[static_cast<std::size_t>(i)]) += rs[static_cast<std::size_t>(i)] * local(i);
  }
  return m;
}

namespace {

/// Symmetric elimination of constrained DOFs at the triplet level: rows and
/// columns are dropped and a unit diagonal inserted; homogeneous data, so
/// the matching RHS entries are simply zeroed.
AssembledSystem finalize_system(std::vector<Triplet>& triplets, Eigen::VectorXd rhs, int n_u,
                                int n_p, bool multiplier, const std::vector<char>& constrained) {
  const int n = n_u + n_p + (multiplier ? 1 : 0);
  std::vector<Triplet> kept;
  kept.reserve(triplets.size() + constrained.size());
  for (const auto& t : triplets) {
    const bool rc = t.row < static_cast<int>(constrained.size()) && constrained[static_cast<std::size_t>(t.row)];
    const bool cc = t.col < static_cast<int>(constrained.size()) && constrained[static_cast<std::size_t>(t.col)];
    if (rc || cc) continue;
    kept.push_back(t);
  }
  for (std::size_t i = 0; i < constrained.size(); ++i)
    if (constrained[i]) {
      kept.push_back({static_cast<int>(i), static_cast<int>(i), 1.0});
      rhs(static_cast<Eigen::Index>(i)) = 0.0;
    }

  AssembledSystem sys;
  sys.matrix = SparseMatrix::from_triplets(n, n, kept);
  sys.rhs = std::move(rhs);
  sys.n_u = n_u;
  sys.n_p = n_p;
  sys.multiplier = multiplier;

  // Scaling hint: |diagonal| where present; for zero-diagonal saddle rows a
  // diagonal Schur-complement estimate sum_j a_ij^2 / d_j.
  const Eigen::VectorXd diag = sys.matrix.diagonal();
  sys.scaling = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i)
    if (std::abs(diag(i)) > 0.0) sys.scaling(i) = std::abs(diag(i));
  const auto& rp = sys.matrix.row_ptr();
  const auto& ci = sys.matrix.col_idx();
  const auto& vals = sys.matrix.values();
  for (int i = 0; i < n; ++i) {
    if (std::abs(diag(i)) > 0.0) continue;
    double s = 0.0;
    for (int k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = ci[static_cast<std::size_t>(k)];
      const double djj = std::abs(diag(j));
      if (djj > 0.0) s += vals[static_cast<std::size_t>(k)] * vals[static_cast<std::size_t>(k)] / djj;
    }
    sys.scaling(i) = (s > 0.0) ? s : 1.0;
  }
  return sys;
}

}  // namespace

AssembledSystem assemble_quadcurl_system(const Mesh& mesh, const FeSpace& velocity,
                                         const FeSpace& pressure, double mu, double gamma,
                                         const VectorField& f) {
  if (mu <= 0.0 || gamma < 0.0) throw std::invalid_argument("quadcurl: need mu > 0, gamma >= 0");
  const int n_u = velocity.map.total;
  const int n_p = pressure.map.total;

  std::vector<Triplet> t;
  assemble_forms(t,
                 {{FormKind::gradcurl_stiffness, mu},
                  {FormKind::curl_mass, 1.0},
                  {FormKind::mass, gamma}},
                 mesh, velocity, velocity);
  // b(v, p) = (v, grad p), assembled as written
  std::vector<Triplet> bt;
  assemble_forms(bt, {{FormKind::b1_v_gradq, 1.0}}, mesh, pressure, velocity, 0, n_u);
  for (const auto& e : bt) {
    t.push_back(e);
    t.push_back({e.col, e.row, e.value});
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_u + n_p);
  rhs.head(n_u) = assemble_load(f, mesh, velocity);

  std::vector<char> constrained(static_cast<std::size_t>(n_u + n_p), 0);
  for (int i = 0; i < n_u; ++i) constrained[static_cast<std::size_t>(i)] = velocity.map.constrained[static_cast<std::size_t>(i)];
  for (int i = 0; i < n_p; ++i)
    constrained[static_cast<std::size_t>(n_u + i)] = pressure.map.constrained[static_cast<std::size_t>(i)];
  return finalize_system(t, std::move(rhs), n_u, n_p, false, constrained);
}

AssembledSystem assemble_brinkman_system(const Mesh& mesh, const FeSpace& velocity,
                                         const FeSpace& pressure, double nu, double alpha,
                                         const VectorField& f, const ScalarField& g) {
  if (nu <= 0.0 || alpha < 0.0) throw std::invalid_argument("brinkman: need nu > 0, alpha >= 0");
  const int n_u = velocity.map.total;
  const int n_p = pressure.map.total;
  const bool multiplier = pressure.map.mean_constraint;
  const int n = n_u + n_p + (multiplier ? 1 : 0);

  std::vector<Triplet> t;
  assemble_forms(t, {{FormKind::grad_stiffness, nu}, {FormKind::mass, alpha}}, mesh, velocity,
                 velocity);
  // -b(v, p) with b(v, p) = (div v, p); second equation negated to keep the
  // system symmetric
  std::vector<Triplet> bt;
  assemble_forms(bt, {{FormKind::b2_divv_q, 1.0}}, mesh, velocity, pressure, n_u, 0);
  for (const auto& e : bt) {
    t.push_back({e.col, e.row, -e.value});
    t.push_back({e.row, e.col, -e.value});
  }
  if (multiplier) {
    const Eigen::VectorXd c = assemble_moments(mesh, pressure);
    for (int q = 0; q < n_p; ++q)
      if (c(q) != 0.0) {
        t.push_back({n_u + n_p, n_u + q, c(q)});
        t.push_back({n_u + q, n_u + n_p, c(q)});
      }
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.head(n_u) = assemble_load(f, mesh, velocity);
  rhs.segment(n_u, n_p) = -assemble_load(g, mesh, pressure);

  std::vector<char> constrained(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n_u; ++i) constrained[static_cast<std::size_t>(i)] = velocity.map.constrained[static_cast<std::size_t>(i)];
  return finalize_system(t, std::move(rhs), n_u, n_p, multiplier, constrained);
}

Eigen::VectorXd cell_coefficients(const FeSpace& space, const Eigen::VectorXd& global_coef,
                                  int cell) {
  const auto& dofs = space.map.cell_dofs[static_cast<std::size_t>(cell)];
  const auto& signs = space.map.cell_signs[static_cast<std::size_t>(cell)];
  Eigen::VectorXd local(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i)
    local(static_cast<Eigen::Index>(i)) = signs[i] * global_coef(dofs[i]);
  return local;
}

namespace {
template <class Field>
Eigen::VectorXd global_interpolate_impl(const Mesh& mesh, const FeSpace& space, const Field& v) {
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(space.map.total);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const ElementDef elem = translate_element(space.elem, mesh.cell_box(c));
    const Eigen::VectorXd local = local_interpolate(elem, v);
    const auto& dofs = space.map.cell_dofs[static_cast<std::size_t>(c)];
    const auto& signs = space.map.cell_signs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dofs.size(); ++i)
      coef(dofs[i]) = signs[i] * local(static_cast<Eigen::Index>(i));
  }
  return coef;
}
}  // namespace

Eigen::VectorXd global_interpolate(const Mesh& mesh, const FeSpace& space, const VectorField& v) {
  return global_interpolate_impl(mesh, space, v);
}

Eigen::VectorXd global_interpolate(const Mesh& mesh, const FeSpace& space, const ScalarField& v) {
  return global_interpolate_impl(mesh, space, v);
}

}  // namespace boxfem
