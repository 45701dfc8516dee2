// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/fields.hpp"

#include <array>
#include <memory>

namespace boxfem {

ScalarField ScalarField::from_poly(const PolyVec& p) {
  if (p.ncomp() != 1) throw std::invalid_argument("ScalarField::from_poly: scalar input required");
  auto grad = std::make_shared<PolyVec>(p.grad());
  ScalarField f;
  f.value = [p](const Vec3& x) { return p.eval(x)[0]; };
  f.grad = [grad](const Vec3& x) { return grad->eval(x); };
  return f;
}

VectorField VectorField::from_poly(const PolyVec& p) {
  if (p.ncomp() != 3) throw std::invalid_argument("VectorField::from_poly: 3-component input required");
  auto curl = std::make_shared<PolyVec>(p.curl());
  auto div = std::make_shared<PolyVec>(p.div());
  auto partials = std::make_shared<std::array<PolyVec, 3>>();
  auto curl_partials = std::make_shared<std::array<PolyVec, 3>>();
  for (int j = 0; j < 3; ++j) {
    (*partials)[static_cast<std::size_t>(j)] = p.partial(j);
    (*curl_partials)[static_cast<std::size_t>(j)] = curl->partial(j);
  }
  VectorField f;
  f.value = [p](const Vec3& x) { return p.eval(x); };
  f.curl = [curl](const Vec3& x) { return curl->eval(x); };
  f.div = [div](const Vec3& x) { return div->eval(x)[0]; };
  f.grad = [partials](const Vec3& x) {
    Mat3 g;
    for (int j = 0; j < 3; ++j) {
      const Vec3 col = (*partials)[static_cast<std::size_t>(j)].eval(x);
      for (int i = 0; i < 3; ++i) g(i, j) = col[i];
    }
    return g;
  };
  f.grad_curl = [curl_partials](const Vec3& x) {
    Mat3 g;
    for (int j = 0; j < 3; ++j) {
      const Vec3 col = (*curl_partials)[static_cast<std::size_t>(j)].eval(x);
      for (int i = 0; i < 3; ++i) g(i, j) = col[i];
    }
    return g;
  };
  return f;
}

}  // namespace boxfem
