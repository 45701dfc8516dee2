// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "boxfem/assembly.hpp"

namespace boxfem {

/// Thrown when a differential operator does not map the source space into
/// the target space cellwise (a structural failure, not a tolerance issue).
class ComplexStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DiffKind { grad, curl, div };

/// Matrix of a differential operator between two global spaces in their
/// nodal bases, built by interpolating the derivative of each source basis
/// function into the target element (exact, since the image lies in the
/// target space; verified to 1e-9 before assembly).
SparseMatrix operator_matrix(DiffKind op, const Mesh& mesh, const FeSpace& source,
                             const FeSpace& target);

struct SlotReport {
  std::string name;
  int dim = 0;           // dimension of the (constrained) space
  int out_rank = 0;      // rank of the outgoing operator
  int kernel_dim = 0;    // dim - out_rank
  int image_in_dim = 0;  // rank of the incoming operator
  bool pass = false;
};

struct ExactnessReport {
  std::vector<SlotReport> slots;
  double comp_zero_curl_grad = 0.0;  // max |curl o grad| entry, relative
  double comp_zero_div_curl = 0.0;
  int alternating_sum = 0;
  int expected_alternating_sum = 0;
  bool pass = false;

  std::string table() const;
  std::string csv() const;
};

/// Numerical exactness audit of the four-space complex on a contractible
/// box mesh, with or without homogeneous boundary conditions; `enriched`
/// selects the bubble-enriched pair over the conforming one.
ExactnessReport check_exactness(const Mesh& mesh, int r, Bc bc, bool enriched = true);

struct CommutingReport {
  double div_enriched = 0.0;   // || div (enriched interp v) - L2proj div v ||
  double div_conforming = 0.0; // same for the conforming H(div) interpolant
  double enriched_split = 0.0; // enriched interp = trimmed + bubble correction
  double bubble_commute = 0.0; // bubble interp of curl w = curl of bubble interp of w
  double max() const;
};

/// Relative residuals of the commuting identities over smooth samples
/// (fields must provide value, curl, and div callbacks).
CommutingReport check_commuting(const Mesh& mesh, int r, const std::vector<VectorField>& samples);

}  // namespace boxfem
