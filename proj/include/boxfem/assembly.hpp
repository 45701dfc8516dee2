// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "boxfem/mesh.hpp"
#include "boxfem/sparse.hpp"

namespace boxfem {

/// Bilinear-form kinds appearing in the two mixed schemes. Composite energy
/// forms are assembled as weighted sums of these.
enum class FormKind {
  mass,                 // (u, v)
  curl_mass,            // (curl u, curl v)
  gradcurl_stiffness,   // (grad curl u, grad curl v)
  grad_stiffness,       // (grad u, grad v)
  div_div,              // (div u, div v)
  b1_v_gradq,           // (v, grad q): scalar trial q, vector test v
  b2_divv_q,            // (div v, q): vector trial v, scalar test q
  load,                 // (f, v)
};

struct FormSpec {
  FormKind kind = FormKind::mass;
  double coefficient = 1.0;
};

/// One global finite element space on a structured mesh: the reference
/// element (on cell 0; all cells share its half-widths) plus the global
/// DOF numbering.
struct FeSpace {
  Family family = Family::S0;
  int order = 0;
  Bc bc = Bc::none;
  ElementDef elem;
  GlobalDofMap map;
};

FeSpace make_fe_space(const Mesh& mesh, Family f, int r, Bc bc, int quad_degree = -1);

/// Nodal-basis values and derivatives tabulated at quadrature points
/// (matrices are npts x ndof; unused channels stay empty).
struct ElementTab {
  std::array<Eigen::MatrixXd, 3> value;
  std::array<Eigen::MatrixXd, 3> curl;
  std::array<std::array<Eigen::MatrixXd, 3>, 3> grad;       // grad[i][j] = d_j phi_i
  std::array<std::array<Eigen::MatrixXd, 3>, 3> grad_curl;  // d_j (curl phi)_i
  Eigen::MatrixXd div;
  Eigen::MatrixXd scalar;                       // scalar families
  std::array<Eigen::MatrixXd, 3> scalar_grad;   // gradient of scalar families
};

enum : unsigned {
  TabValue = 1u,
  TabCurl = 2u,
  TabGrad = 4u,
  TabGradCurl = 8u,
  TabDiv = 16u,
  TabScalarGrad = 32u,
};

/// Tabulate at the points of a rule given in the element's own cell.
ElementTab tabulate_element(const ElementDef& elem, const Quadrature& rule, unsigned channels);

/// Local matrix of one form: entry (i, j) = form(trial_j, test_i),
/// integrated with a tensor Gauss rule exact for the polynomial integrand.
Eigen::MatrixXd local_matrix(const FormSpec& form, const ElementDef& trial, const ElementDef& test,
                             int quad_degree = -1);

/// Scatter the (cell-independent) local matrix of a sum of forms over the
/// mesh. Offsets shift the global row/column indices so several blocks can
/// share one triplet list. No boundary handling here.
void assemble_forms(std::vector<Triplet>& out, const std::vector<FormSpec>& forms, const Mesh& mesh,
                    const FeSpace& trial, const FeSpace& test, int row_offset = 0,
                    int col_offset = 0, int quad_degree = -1);

/// Load vector (f, psi_i) with quadrature degree = element degree +
/// oversample extra digits of exactness (default +4 per axis).
Eigen::VectorXd assemble_load(const VectorField& f, const Mesh& mesh, const FeSpace& space,
                              int oversample = 4);
Eigen::VectorXd assemble_load(const ScalarField& f, const Mesh& mesh, const FeSpace& space,
                              int oversample = 4);

/// Componentwise integrals of the space's nodal functions over the mesh
/// (used for the mean-zero pressure constraint).
Eigen::VectorXd assemble_moments(const Mesh& mesh, const FeSpace& space);

/// Assembled saddle-point system: velocity block, pressure block, optional
/// mean-zero multiplier row/column. Dirichlet DOFs are eliminated
/// symmetrically (zeroed rows/columns with a unit diagonal).
struct AssembledSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  int n_u = 0;
  int n_p = 0;
  bool multiplier = false;
  Eigen::VectorXd scaling;  // diagonal scaling hint for the solver

  int size() const { return n_u + n_p + (multiplier ? 1 : 0); }
};

/// Mixed scheme for the -curl Delta curl problem: A = mu (grad curl, grad
/// curl) + (curl, curl) + gamma (.,.), coupled with b(v, p) = (v, grad p)
/// assembled exactly as written.
AssembledSystem assemble_quadcurl_system(const Mesh& mesh, const FeSpace& velocity,
                                         const FeSpace& pressure, double mu, double gamma,
                                         const VectorField& f);

/// Mixed scheme for the Brinkman problem: A = nu (grad, grad) + alpha (.,.),
/// b(v, p) = (div v, p), with the mean-zero pressure constraint appended as
/// a Lagrange multiplier row/column.
AssembledSystem assemble_brinkman_system(const Mesh& mesh, const FeSpace& velocity,
                                         const FeSpace& pressure, double nu, double alpha,
                                         const VectorField& f, const ScalarField& g);

/// Local coefficients (sign-adjusted) of a global coefficient vector.
Eigen::VectorXd cell_coefficients(const FeSpace& space, const Eigen::VectorXd& global_coef,
                                  int cell);

/// Interpolate a smooth field cell by cell into the global space.
Eigen::VectorXd global_interpolate(const Mesh& mesh, const FeSpace& space, const VectorField& v);
Eigen::VectorXd global_interpolate(const Mesh& mesh, const FeSpace& space, const ScalarField& v);

}  // namespace boxfem
