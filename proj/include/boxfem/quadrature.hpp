// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "boxfem/geometry.hpp"

namespace boxfem {

/// Quadrature rule with physical points and positive weights. Weights sum to
/// the measure of the integration domain (volume, area, or length).
struct Quadrature {
  std::vector<Vec3> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

/// Gauss-Legendre nodes and weights on [-1,1]; exact through degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor Gauss rule on a box, exact for all monomials with per-axis degree
/// up to `degree` (per-axis point count ceil((degree+1)/2)).
Quadrature gauss_tensor(const Box3& cell, int degree);

/// Tensor Gauss rule on an axis-aligned entity embedded in 3D: `center` plus
/// per-axis half-extents, where a zero half-extent marks a collapsed axis.
/// Covers faces (one zero) and edges (two zeros); weights carry the
/// area/length Jacobian over the active axes only.
Quadrature gauss_entity(const Vec3& center, const Vec3& halfwidth, int degree);

/// Rule over the given local face of a cell.
Quadrature gauss_face(const Box3& cell, int face, int degree);

}  // namespace boxfem
