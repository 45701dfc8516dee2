// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/monomial.hpp"

#include <algorithm>

namespace boxfem {

std::vector<MonoIndex> monomials_total_degree(int deg, int nvars) {
  std::vector<MonoIndex> out;
  if (deg < 0) return out;
  for (int d = 0; d <= deg; ++d) {
    auto h = monomials_homogeneous(d, nvars);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

std::vector<MonoIndex> monomials_homogeneous(int deg, int nvars) {
  std::vector<MonoIndex> out;
  if (deg < 0) return out;
  if (nvars == 1) {
    out.emplace_back(deg, 0, 0);
    return out;
  }
  if (nvars == 2) {
    for (int a = deg; a >= 0; --a) out.emplace_back(a, deg - a, 0);
    return out;
  }
  for (int a = deg; a >= 0; --a)
    for (int b = deg - a; b >= 0; --b) out.emplace_back(a, b, deg - a - b);
  return out;
}

std::vector<MonoIndex> monomials_superlinear(int r) {
  std::vector<MonoIndex> out;
  const int emax = std::max(r, 1);
  for (int a = 0; a <= emax; ++a)
    for (int b = 0; b <= emax; ++b)
      for (int c = 0; c <= emax; ++c) {
        MonoIndex m(a, b, c);
        if (m.superlinear_degree() <= r) out.push_back(m);
      }
  std::sort(out.begin(), out.end(), [](const MonoIndex& x, const MonoIndex& y) {
    if (x.total_degree() != y.total_degree()) return x.total_degree() < y.total_degree();
    return x.e < y.e;
  });
  return out;
}

}  // namespace boxfem
