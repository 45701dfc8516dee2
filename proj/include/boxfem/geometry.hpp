// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace boxfem {

/// Small fixed-size 3-vector used for points, normals, and field values.
struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  Vec3() = default;
  Vec3(double x, double y, double z) : v{x, y, z} {}

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  Vec3 operator+(const Vec3& o) const { return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}; }
  Vec3 operator-(const Vec3& o) const { return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}; }
  Vec3 operator*(double s) const { return {v[0] * s, v[1] * s, v[2] * s}; }
  Vec3& operator+=(const Vec3& o) {
    v[0] += o.v[0];
    v[1] += o.v[1];
    v[2] += o.v[2];
    return *this;
  }

  double dot(const Vec3& o) const { return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2]; }
  Vec3 cross(const Vec3& o) const {
    return {v[1] * o.v[2] - v[2] * o.v[1], v[2] * o.v[0] - v[0] * o.v[2],
            v[0] * o.v[1] - v[1] * o.v[0]};
  }
  double norm() const { return std::sqrt(dot(*this)); }

  static Vec3 axis(int a) {
    Vec3 e;
    e[a] = 1.0;
    return e;
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 matrix for Jacobians (grad of a vector field, grad curl, ...).
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  double& operator()(int i, int j) { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double operator()(int i, int j) const {
    return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(i, j) - o(i, j);
    return r;
  }

  double frobenius_sq() const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += (*this)(i, j) * (*this)(i, j);
    return s;
  }

  /// Row i = gradient of component i; multiplying by a direction gives the
  /// directional derivative of the field.
  Vec3 apply(const Vec3& d) const {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = m[static_cast<std::size_t>(i)][0] * d[0] +
                                       m[static_cast<std::size_t>(i)][1] * d[1] +
                                       m[static_cast<std::size_t>(i)][2] * d[2];
    return r;
  }
};

/// Axis-aligned box cell, stored as center plus per-axis half-widths.
/// Polynomials on the cell are expressed in the scaled local coordinates
/// xi_i = (x_i - center_i) / halfwidth_i, so that xi ranges over [-1,1]^3.
struct Box3 {
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 halfwidth{1.0, 1.0, 1.0};

  Box3() = default;
  Box3(const Vec3& c, const Vec3& h) : center(c), halfwidth(h) {
    if (h[0] <= 0.0 || h[1] <= 0.0 || h[2] <= 0.0)
      throw std::invalid_argument("Box3: half-widths must be positive");
  }

  /// Diameter h_K = sqrt(h1^2 + h2^2 + h3^2).
  double diameter() const { return halfwidth.norm(); }
  double volume() const { return 8.0 * halfwidth[0] * halfwidth[1] * halfwidth[2]; }

  Vec3 to_local(const Vec3& x) const {
    return {(x[0] - center[0]) / halfwidth[0], (x[1] - center[1]) / halfwidth[1],
            (x[2] - center[2]) / halfwidth[2]};
  }
  Vec3 to_physical(const Vec3& xi) const {
    return {center[0] + halfwidth[0] * xi[0], center[1] + halfwidth[1] * xi[1],
            center[2] + halfwidth[2] * xi[2]};
  }

  /// The bi-unit reference cell [-1,1]^3.
  static Box3 reference() { return Box3({0, 0, 0}, {1, 1, 1}); }
};

/// Local face numbering on a cell: face = 2*axis + side, side 0 = low, 1 = high.
inline int face_axis(int face) { return face / 2; }
inline int face_side(int face) { return face % 2; }

/// Outward unit normal of a local face.
inline Vec3 face_outward_normal(int face) {
  Vec3 n = Vec3::axis(face_axis(face));
  return face_side(face) == 1 ? n : n * -1.0;
}

/// Tangential frame of a face with normal along +axis: t1 is the
/// lower-lettered tangential axis and t2 = n x t1, so (t1, t2, n) is
/// right-handed. The same frame is used by every cell touching the face.
struct FaceFrame {
  Vec3 normal;  // global convention: along the positive axis
  Vec3 t1, t2;
  int axis1, axis2;     // coordinate axes carrying t1, t2 (up to sign)
  double sign2;         // t2 = sign2 * axis2 unit vector
};

inline FaceFrame face_frame(int axis) {
  FaceFrame fr;
  fr.normal = Vec3::axis(axis);
  fr.axis1 = (axis == 0) ? 1 : 0;
  fr.axis2 = (axis == 2) ? 1 : 2;
  fr.t1 = Vec3::axis(fr.axis1);
  fr.t2 = fr.normal.cross(fr.t1);
  fr.sign2 = fr.t2[fr.axis2];
  return fr;
}

}  // namespace boxfem
