// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boxfem {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  std::vector<Triplet> t = triplets;
  for (const auto& e : t)
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw std::invalid_argument("SparseMatrix: triplet out of range");
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
  m.col_idx_.reserve(t.size());
  m.values_.reserve(t.size());
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < t.size() && t[i].row == r) {
      const int c = t[i].col;
      double v = 0.0;
      while (i < t.size() && t[i].row == r && t[i].col == c) v += t[i++].value;
      if (v != 0.0) {
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<int>(m.col_idx_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, t);
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != cols_) throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      s += values_[static_cast<std::size_t>(k)] * x(col_idx_[static_cast<std::size_t>(k)]);
    y(r) = s;
  }
  return y;
}

Eigen::VectorXd SparseMatrix::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(std::min(rows_, cols_));
  for (int r = 0; r < d.size(); ++r) {
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      if (col_idx_[static_cast<std::size_t>(k)] == r) d(r) = values_[static_cast<std::size_t>(k)];
  }
  return d;
}

Eigen::VectorXd SparseMatrix::row_max_abs() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(rows_);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      m(r) = std::max(m(r), std::abs(values_[static_cast<std::size_t>(k)]));
  return m;
}

double SparseMatrix::symmetry_error() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double err = 0.0;
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      const int c = col_idx_[static_cast<std::size_t>(k)];
      const double v = values_[static_cast<std::size_t>(k)];
      // binary search for (c, r)
      const int lo = row_ptr_[static_cast<std::size_t>(c)], hi = row_ptr_[static_cast<std::size_t>(c) + 1];
      const auto it = std::lower_bound(col_idx_.begin() + lo, col_idx_.begin() + hi, r);
      double vt = 0.0;
      if (it != col_idx_.begin() + hi && *it == r)
        vt = values_[static_cast<std::size_t>(it - col_idx_.begin())];
      err = std::max(err, std::abs(v - vt));
    }
  }
  return err;
}

bool SparseMatrix::is_symmetric(double rel_tol) const {
  if (rows_ != cols_) return false;
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  return symmetry_error() <= rel_tol * std::max(scale, 1e-300);
}

SparseMatrix SparseMatrix::scaled(const Eigen::VectorXd& d) const {
  if (d.size() != rows_ || rows_ != cols_)
    throw std::invalid_argument("SparseMatrix::scaled: bad scaling vector");
  SparseMatrix m = *this;
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      m.values_[static_cast<std::size_t>(k)] /= d(r) * d(col_idx_[static_cast<std::size_t>(k)]);
  return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
      m(r, col_idx_[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
  return m;
}

}  // namespace boxfem
