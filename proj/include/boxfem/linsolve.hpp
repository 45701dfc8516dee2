// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "boxfem/sparse.hpp"

namespace boxfem {

struct SolveResult {
  Eigen::VectorXd x;
  double rel_residual = 0.0;
  int iterations = 0;
};

/// Thrown by the dense kernels on singular or numerically inconsistent input.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when the iterative solver does not reach the requested tolerance;
/// carries the best solution and residual found.
class IterationLimitError : public std::runtime_error {
 public:
  IterationLimitError(const std::string& what, SolveResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const SolveResult& best() const { return best_; }

 private:
  SolveResult best_;
};

/// MINRES for symmetric (possibly indefinite) systems. A diagonal
/// absolute-value scaling is applied internally (sqrt(|a_ii|), falling back
/// to the row max where the diagonal vanishes) unless `scaling` provides the
/// diagonal to scale with. Stops on the scaled recurrence residual and
/// re-checks the true unscaled residual before returning, restarting if the
/// recurrence estimate was optimistic. Deterministic for identical inputs.
SolveResult solve_sym_indef(const SparseMatrix& a, const Eigen::VectorXd& b, double tol = 1e-10,
                            int maxit = 0, const Eigen::VectorXd* scaling = nullptr);

/// Dense LU solve with partial pivoting; throws on (near-)singular input.
Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Smallest eigenvalue of a symmetric matrix, cross-checked against a
/// shifted inverse iteration; throws if the two disagree beyond 1e-8
/// relative to the spectral scale.
double dense_eigs_smallest(const Eigen::MatrixXd& a);

/// Singular values in decreasing order. Tall/wide inputs are first
/// compressed by a QR factorization, then handed to the (slow but reliable)
/// two-sided Jacobi SVD.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

/// Numerical rank at a relative tolerance; optionally reports the spectral
/// gap at the cutoff (ratio across the threshold, or the margin
/// sigma_min / (tol * sigma_max) for full-rank inputs).
int numerical_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-8, double* gap = nullptr);

/// Orthonormal basis of the (right) null space, as matrix columns.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& a, double rel_tol = 1e-8);

}  // namespace boxfem
