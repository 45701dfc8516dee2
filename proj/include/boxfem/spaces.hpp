// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boxfem/polyvec.hpp"

namespace boxfem {

/// Element families on a box cell, indexed by the complex order r:
///   S0      scalar serendipity space (superlinear degree <= r), r >= 1
///   S1      trimmed H(curl) space of order (r-1, r)
///   S2      H(div) space of order r-1
///   S3      discontinuous P_{r-2}
///   SPlus1  S1 enriched with the curl-smoothing cell bubbles V
///   SPlus2  S2 enriched with U = curl V
///   VBubble / UBubble  the bubble spaces themselves
enum class Family { S0, S1, S2, S3, SPlus1, SPlus2, VBubble, UBubble };

std::string family_name(Family f);

/// Closed-form dimension of the local shape-function space.
int space_dimension(Family f, int r);

/// Thrown when a rank or null-space computation does not produce the
/// structurally required dimension.
class NumericalDegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bookkeeping for one bubble shape function z = B_K B_f q: the local face
/// it is attached to and the tangential polynomial q (paired with the
/// outward face normal).
struct BubbleInfo {
  int face = -1;
  PolyVec tangential;
};

/// Ordered basis of one element space on one cell.
struct SpaceBasis {
  Family family = Family::S0;
  int order = 0;
  Box3 cell;
  std::vector<PolyVec> basis;
  /// Aligned with `basis` for VBubble/UBubble; empty otherwise.
  std::vector<BubbleInfo> bubble;
  /// For SPlus1/SPlus2: index where the bubble block starts (= dim of the
  /// unenriched part). -1 for other families.
  int enrichment_offset = -1;

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Construct the shape-function basis of a family on a cell. Families that
/// are defined as non-direct sums are reduced to a linearly independent
/// basis by column-pivoted QR with relative tolerance 1e-10 and then
/// L2-orthonormalized on the cell.
SpaceBasis build_space(Family f, int r, const Box3& cell);

/// Construct the bubble pair (V, U = curl V). Each V member is returned as
/// z = B_K B_f q normalized to unit L2 norm, with (face, q) recorded; the
/// corresponding U member is exactly curl z.
std::pair<SpaceBasis, SpaceBasis> build_bubbles(int r, const Box3& cell);

/// The scalar cell bubble B_K = prod_i (x_i - c_i + h_i)(c_i + h_i - x_i).
PolyVec cell_bubble(const Box3& cell);
/// The face bubble B_f = B_K / lambda_f for a local face.
PolyVec face_bubble(const Box3& cell, int face);

/// Legendre polynomial coefficients in the monomial basis on [-1,1].
std::vector<double> legendre_coefficients(int k);

/// Reduce a spanning set to a linearly independent, coefficient-orthonormal
/// basis (column-pivoted QR on the stacked coefficient matrix).
std::vector<PolyVec> reduce_to_basis(const std::vector<PolyVec>& generators, double rel_tol = 1e-10);

/// Numerical rank of the stacked coefficient matrix of a set of polynomials.
int coefficient_rank(const std::vector<PolyVec>& polys, double rel_tol = 1e-10);

/// Rank of the union of two sets (for subspace-inclusion checks).
int coefficient_rank_union(const std::vector<PolyVec>& a, const std::vector<PolyVec>& b,
                           double rel_tol = 1e-10);

}  // namespace boxfem
