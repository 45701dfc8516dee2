// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "boxfem/geometry.hpp"
#include "boxfem/polyvec.hpp"

namespace boxfem {

/// Smooth scalar function with analytic gradient.
struct ScalarField {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> grad;

  static ScalarField from_poly(const PolyVec& p);
};

/// Smooth vector field with the analytic derivatives the interpolation
/// operators and error norms require. Derivatives are supplied by the
/// caller (symbolic or polynomial), never by differencing.
struct VectorField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> curl;
  std::function<double(const Vec3&)> div;
  std::function<Mat3(const Vec3&)> grad;       // row i = gradient of component i
  std::function<Mat3(const Vec3&)> grad_curl;  // row i = gradient of (curl v)_i

  static VectorField from_poly(const PolyVec& p);
};

}  // namespace boxfem
