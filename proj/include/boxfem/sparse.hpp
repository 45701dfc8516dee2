// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace boxfem {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Compressed-sparse-row matrix with sorted, duplicate-free column indices
/// per row. Symmetric matrices are stored fully. Immutable after
/// construction and safe for concurrent reads.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);
  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;
  /// Max |a_ij| per row (used for scaling rows whose diagonal vanishes).
  Eigen::VectorXd row_max_abs() const;

  /// Max |a_ij - a_ji| over all entries.
  double symmetry_error() const;
  bool is_symmetric(double rel_tol = 1e-12) const;

  /// Symmetrically scaled copy: out_ij = a_ij / (d_i d_j).
  SparseMatrix scaled(const Eigen::VectorXd& d) const;

  Eigen::MatrixXd to_dense() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

}  // namespace boxfem
