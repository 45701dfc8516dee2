// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boxfem/geometry.hpp"
#include "boxfem/monomial.hpp"

namespace boxfem {

/// Scalar- or vector-valued polynomial in three variables.
///
/// Coefficients are stored over an explicit monomial list in the scaled local
/// coordinates xi_i = (x_i - c_i)/h_i of the associated cell, which keeps
/// coefficient magnitudes and Vandermonde conditioning independent of the
/// mesh size. Differentiation with respect to the physical coordinates
/// carries the 1/h_i chain-rule factors.
///
/// ncomp is 1 for scalars and 3 for fields; 2 is allowed for tangential
/// weights expressed in a face frame.
class PolyVec {
 public:
  PolyVec() = default;
  PolyVec(int ncomp, const Box3& cell, std::vector<MonoIndex> monos, Eigen::MatrixXd coef);

  static PolyVec zero(int ncomp, const Box3& cell);
  static PolyVec constant(const Box3& cell, double value);
  /// Scalar monomial xi^e in the local coordinates of the cell.
  static PolyVec monomial(const Box3& cell, const MonoIndex& e);
  /// Scalar polynomial placed in component `comp` of an `ncomp`-vector.
  static PolyVec embed(const PolyVec& scalar, int comp, int ncomp);
  /// The physical position field x = c + h.xi (three components).
  static PolyVec position(const Box3& cell);

  int ncomp() const { return ncomp_; }
  const Box3& cell() const { return cell_; }
  const std::vector<MonoIndex>& monomials() const { return monos_; }
  const Eigen::MatrixXd& coef() const { return coef_; }
  Eigen::MatrixXd& coef() { return coef_; }

  int max_total_degree() const;
  double max_abs_coef() const { return coef_.size() == 0 ? 0.0 : coef_.cwiseAbs().maxCoeff(); }
  bool is_zero() const { return max_abs_coef() == 0.0; }

  PolyVec operator+(const PolyVec& o) const;
  PolyVec operator-(const PolyVec& o) const;
  PolyVec operator*(double s) const;
  PolyVec& operator*=(double s);

  /// Product with a scalar polynomial on the same cell.
  PolyVec multiply(const PolyVec& scalar) const;
  /// Cross product of two 3-component polynomials.
  PolyVec cross(const PolyVec& o) const;
  PolyVec cross(const Vec3& b) const;
  /// Pointwise dot product; both operands must share ncomp. Returns a scalar.
  PolyVec dot(const PolyVec& o) const;

  PolyVec component(int i) const;

  /// d/dx_i in physical coordinates.
  PolyVec partial(int axis) const;
  PolyVec grad() const;   // 1 -> 3
  PolyVec curl() const;   // 3 -> 3
  PolyVec div() const;    // 3 -> 1

  /// Value at a physical point; only the first ncomp entries are meaningful.
  Vec3 eval(const Vec3& x) const;
  double eval_scalar(const Vec3& x) const;
  /// Value at a point given directly in local coordinates.
  Vec3 eval_local(const Vec3& xi) const;

  /// Exact integral over the cell of each component (closed-form monomial
  /// integration, including the physical volume Jacobian).
  Eigen::VectorXd integral() const;
  /// Exact L2(K)^ncomp inner product with another polynomial.
  double inner(const PolyVec& o) const;
  double l2_norm() const;

  /// Remove exactly-zero monomial columns.
  void prune();

  /// The same local-coordinate polynomial expressed on a translated cell of
  /// identical half-widths (exact translation of the function).
  PolyVec translated(const Box3& new_cell) const;

 private:
  int ncomp_ = 1;
  Box3 cell_ = Box3::reference();
  std::vector<MonoIndex> monos_;
  Eigen::MatrixXd coef_;  // ncomp x monos_.size()
};

enum class DiffOp { grad, curl, div, partial1, partial2, partial3 };

/// Differential operator dispatch used by callers that take the operator as
/// data. grad: 1->3, curl: 3->3, div: 3->1, partial_i: componentwise.
PolyVec diff(const PolyVec& p, DiffOp op);

/// Stack a list of polynomials sharing one cell into a dense matrix over a
/// common monomial list; row i holds all components of polynomial i
/// (component-major blocks). Used for rank computations and basis surgery.
struct StackedPolys {
  int ncomp = 1;
  Box3 cell;
  std::vector<MonoIndex> monos;
  Eigen::MatrixXd rows;  // n_polys x (ncomp * monos.size())
};
StackedPolys stack_polys(const std::vector<PolyVec>& polys);
/// Inverse of stack_polys for a single row.
PolyVec unstack_row(const StackedPolys& s, const Eigen::VectorXd& row);

}  // namespace boxfem
