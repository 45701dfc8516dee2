// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/manufactured.hpp"

#include <memory>
#include <numbers>

namespace boxfem {

VectorField to_field(const SymVec3& v) {
  struct Derived {
    std::array<CompiledExpr, 3> value, curl;
    CompiledExpr div;
    std::array<std::array<CompiledExpr, 3>, 3> grad, grad_curl;
  };
  auto d = std::make_shared<Derived>();
  const SymVec3 curl = v.curl();
  d->div = CompiledExpr(v.div());
  for (int i = 0; i < 3; ++i) {
    d->value[static_cast<std::size_t>(i)] = CompiledExpr(v.c[static_cast<std::size_t>(i)]);
    d->curl[static_cast<std::size_t>(i)] = CompiledExpr(curl.c[static_cast<std::size_t>(i)]);
    for (int j = 0; j < 3; ++j) {
      d->grad[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          CompiledExpr(v.c[static_cast<std::size_t>(i)].diff(j));
      d->grad_curl[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          CompiledExpr(curl.c[static_cast<std::size_t>(i)].diff(j));
    }
  }

  VectorField f;
  f.value = [d](const Vec3& x) {
    return Vec3{d->value[0].eval(x), d->value[1].eval(x), d->value[2].eval(x)};
  };
  f.curl = [d](const Vec3& x) {
    return Vec3{d->curl[0].eval(x), d->curl[1].eval(x), d->curl[2].eval(x)};
  };
  f.div = [d](const Vec3& x) { return d->div.eval(x); };
  f.grad = [d](const Vec3& x) {
    Mat3 g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        g(i, j) = d->grad[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
    return g;
  };
  f.grad_curl = [d](const Vec3& x) {
    Mat3 g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        g(i, j) = d->grad_curl[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
    return g;
  };
  return f;
}

ScalarField to_field(const SymExpr& e) {
  struct Derived {
    CompiledExpr value;
    std::array<CompiledExpr, 3> grad;
  };
  auto d = std::make_shared<Derived>();
  d->value = CompiledExpr(e);
  for (int i = 0; i < 3; ++i)
    d->grad[static_cast<std::size_t>(i)] = CompiledExpr(e.diff(i));
  ScalarField f;
  f.value = [d](const Vec3& x) { return d->value.eval(x); };
  f.grad = [d](const Vec3& x) {
    return Vec3{d->grad[0].eval(x), d->grad[1].eval(x), d->grad[2].eval(x)};
  };
  return f;
}

VectorField ExactSolution::velocity() const { return to_field(u); }
VectorField ExactSolution::rhs() const { return to_field(f); }
ScalarField ExactSolution::pressure() const { return to_field(p); }

ExactSolution make_quadcurl_example(double mu, double gamma) {
  const double pi = std::numbers::pi;
  const SymExpr x = SymExpr::coord(0), y = SymExpr::coord(1), z = SymExpr::coord(2);
  const SymExpr sx = SymExpr::sin(x * pi), cx = SymExpr::cos(x * pi);
  const SymExpr sy = SymExpr::sin(y * pi), cy = SymExpr::cos(y * pi);
  const SymExpr sz = SymExpr::sin(z * pi), cz = SymExpr::cos(z * pi);

  ExactSolution sol;
  sol.u = SymVec3(sx.pow(3) * sy.pow(2) * sz.pow(2) * cy * cz,
                  sy.pow(3) * sz.pow(2) * sx.pow(2) * cz * cx,
                  sz.pow(3) * sx.pow(2) * sy.pow(2) * cx * cy * -2.0);
  const SymVec3 curl_u = sol.u.curl();
  sol.f = curl_u.laplacian().curl() * (-mu) + curl_u.curl() + sol.u * gamma;
  sol.p = SymExpr();
  sol.g = SymExpr();
  return sol;
}

ExactSolution make_brinkman_example(double nu, double alpha) {
  const SymExpr x = SymExpr::coord(0), y = SymExpr::coord(1), z = SymExpr::coord(2);
  const SymExpr one = SymExpr::constant(1.0);
  const SymVec3 psi(y.pow(2) * (one - y).pow(2) * x * (one - x) * z.pow(2) * (one - z).pow(3),
                    x.pow(2) * (one - x).pow(2) * y * (one - y) * z.pow(2) * (one - z).pow(3),
                    SymExpr());

  ExactSolution sol;
  sol.u = psi.curl();
  sol.p = (x - SymExpr::constant(0.5)) * (y - SymExpr::constant(0.5)) * (one - z);
  sol.f = sol.u.laplacian() * (-nu) + sol.u * alpha + sym_grad(sol.p);
  sol.g = SymExpr();
  return sol;
}

}  // namespace boxfem
