// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boxfem {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pn1 = (n == 1) ? 1.0 : p0;  // P_{n-1}
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

Quadrature gauss_entity(const Vec3& center, const Vec3& halfwidth, int degree) {
  if (degree < 0) throw std::invalid_argument("gauss_entity: degree must be non-negative");
  const int n = (degree + 2) / 2;  // ceil((degree+1)/2)
  std::vector<double> x, w;
  gauss_legendre(n, x, w);

  std::vector<int> active;
  double jac = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (halfwidth[a] > 0.0) {
      active.push_back(a);
      jac *= halfwidth[a];
    }
  }

  Quadrature q;
  // Iterate the tensor grid over active axes.
  std::vector<int> idx(active.size(), 0);
  while (true) {
    Vec3 p = center;
    double weight = jac;
    for (std::size_t d = 0; d < active.size(); ++d) {
      p[active[d]] += halfwidth[active[d]] * x[static_cast<std::size_t>(idx[d])];
      weight *= w[static_cast<std::size_t>(idx[d])];
    }
    q.points.push_back(p);
    q.weights.push_back(weight);
    // advance
    std::size_t d = 0;
    for (; d < active.size(); ++d) {
      if (++idx[d] < n) break;
      idx[d] = 0;
    }
    if (d == active.size()) break;
  }
  return q;
}

Quadrature gauss_tensor(const Box3& cell, int degree) {
  return gauss_entity(cell.center, cell.halfwidth, degree);
}

Quadrature gauss_face(const Box3& cell, int face, int degree) {
  const int a = face_axis(face);
  Vec3 c = cell.center;
  c[a] += (face_side(face) == 1 ? 1.0 : -1.0) * cell.halfwidth[a];
  Vec3 h = cell.halfwidth;
  h[a] = 0.0;
  return gauss_entity(c, h, degree);
}

}  // namespace boxfem
