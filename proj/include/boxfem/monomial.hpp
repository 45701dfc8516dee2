// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <vector>

namespace boxfem {

/// Exponent triple of a monomial x1^e1 x2^e2 x3^e3.
struct MonoIndex {
  std::array<int, 3> e{0, 0, 0};

  MonoIndex() = default;
  MonoIndex(int e1, int e2, int e3) : e{e1, e2, e3} {}

  int total_degree() const { return e[0] + e[1] + e[2]; }

  /// Degree ignoring variables that enter linearly: exponents equal to one
  /// do not count (x^2 y z^3 has superlinear degree 5).
  int superlinear_degree() const {
    int d = 0;
    for (int v : e)
      if (v >= 2) d += v;
    return d;
  }

  auto operator<=>(const MonoIndex&) const = default;
};

inline int superlinear_degree(const MonoIndex& m) { return m.superlinear_degree(); }

/// All monomials of total degree <= deg in nvars variables (remaining
/// exponents zero), listed in a fixed deterministic order.
std::vector<MonoIndex> monomials_total_degree(int deg, int nvars = 3);

/// All monomials of total degree exactly deg.
std::vector<MonoIndex> monomials_homogeneous(int deg, int nvars = 3);

/// Monomial basis of the serendipity space: superlinear degree <= r.
std::vector<MonoIndex> monomials_superlinear(int r);

}  // namespace boxfem
