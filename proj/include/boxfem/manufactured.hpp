// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "boxfem/fields.hpp"
#include "boxfem/symexpr.hpp"

namespace boxfem {

/// Manufactured solution with exact symbolic derivatives: the velocity (and
/// pressure, where applicable) plus the right-hand side assembled
/// symbolically from the PDE.
struct ExactSolution {
  SymVec3 u;
  SymExpr p;  // identically zero for the quad-curl problem
  SymVec3 f;
  SymExpr g;  // divergence data (Brinkman); zero otherwise

  /// Velocity callbacks with value, curl, div, grad, and grad curl.
  VectorField velocity() const;
  VectorField rhs() const;
  ScalarField pressure() const;
};

/// Divergence-free trigonometric field on the unit cube with u x n = 0 and
/// curl u = 0 on the boundary; f = -mu curl lap curl u + curl curl u +
/// gamma u.
ExactSolution make_quadcurl_example(double mu, double gamma);

/// Velocity u = curl psi (polynomial, vanishing on the boundary), pressure
/// p = (x - 1/2)(y - 1/2)(1 - z); f = -nu lap u + alpha u + grad p, g = 0.
ExactSolution make_brinkman_example(double nu, double alpha);

/// Field wrapper around a symbolic vector with all derivative callbacks.
VectorField to_field(const SymVec3& v);
ScalarField to_field(const SymExpr& e);

}  // namespace boxfem
