// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "boxfem/geometry.hpp"

namespace boxfem {

/// Exact symbolic expressions built from constants, coordinates, sums,
/// products, integer powers, and sin/cos of affine single-coordinate
/// arguments. Stored in a canonical sum-of-separable-products form that is
/// closed under differentiation, so repeated exact derivatives stay compact
/// (like terms are merged).
class SymExpr {
 public:
  SymExpr() = default;  // zero

  static SymExpr constant(double c);
  static SymExpr coord(int axis);
  /// sin/cos of an affine argument a*x_axis + b.
  static SymExpr sin(const SymExpr& arg);
  static SymExpr cos(const SymExpr& arg);

  SymExpr operator+(const SymExpr& o) const;
  SymExpr operator-(const SymExpr& o) const;
  SymExpr operator*(const SymExpr& o) const;
  SymExpr operator*(double s) const;
  SymExpr pow(int k) const;

  /// Exact partial derivative with respect to x_axis.
  SymExpr diff(int axis) const;

  double eval(const Vec3& x) const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  friend class CompiledExpr;

 private:
  struct Factor {
    enum class Kind { X, Sin, Cos } kind = Kind::X;
    int axis = 0;
    int power = 1;
    double a = 1.0, b = 0.0;  // trig argument a*x+b

    friend bool same_base(const Factor& f, const Factor& g) {
      return f.kind == g.kind && f.axis == g.axis && f.a == g.a && f.b == g.b;
    }
    friend bool base_less(const Factor& f, const Factor& g) {
      if (f.axis != g.axis) return f.axis < g.axis;
      if (f.kind != g.kind) return static_cast<int>(f.kind) < static_cast<int>(g.kind);
      if (f.a != g.a) return f.a < g.a;
      return f.b < g.b;
    }
  };
  struct Term {
    double coef = 0.0;
    std::vector<Factor> factors;  // sorted by base
  };
  std::vector<Term> terms_;

  static void normalize_term(Term& t);
  void merge();
  static bool affine_of_one_axis(const SymExpr& e, int& axis, double& a, double& b);
};

inline SymExpr operator*(double s, const SymExpr& e) { return e * s; }

/// Fast evaluator: each distinct sin/cos/x base is evaluated once per point
/// regardless of how many terms reference it.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const SymExpr& e);
  double eval(const Vec3& x) const;

 private:
  struct Base {
    int kind = 0;  // 0 = X, 1 = sin, 2 = cos
    int axis = 0;
    double a = 1.0, b = 0.0;
  };
  struct CFactor {
    int base = 0;
    int power = 1;
  };
  struct CTerm {
    double coef = 0.0;
    int begin = 0, end = 0;  // factor range
  };
  std::vector<Base> bases_;
  std::vector<CFactor> factors_;
  std::vector<CTerm> terms_;
};

/// Symbolic 3-vector with the differential operators used by the schemes.
struct SymVec3 {
  std::array<SymExpr, 3> c;

  SymVec3() = default;
  SymVec3(SymExpr c0, SymExpr c1, SymExpr c2) : c{std::move(c0), std::move(c1), std::move(c2)} {}

  Vec3 eval(const Vec3& x) const { return {c[0].eval(x), c[1].eval(x), c[2].eval(x)}; }

  SymVec3 curl() const;
  SymExpr div() const;
  SymVec3 laplacian() const;  // componentwise
  SymVec3 operator+(const SymVec3& o) const;
  SymVec3 operator*(double s) const;
};

SymVec3 sym_grad(const SymExpr& e);

}  // namespace boxfem
