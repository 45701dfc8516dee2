// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/symexpr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boxfem {

void SymExpr::normalize_term(Term& t) {
  std::sort(t.factors.begin(), t.factors.end(), [](const Factor& f, const Factor& g) {
    return base_less(f, g);
  });
  std::vector<Factor> out;
  for (const auto& f : t.factors) {
    if (f.power == 0) continue;
    if (!out.empty() && same_base(out.back(), f))
      out.back().power += f.power;
    else
      out.push_back(f);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Factor& f) { return f.power == 0; }),
            out.end());
  t.factors = std::move(out);
}

void SymExpr::merge() {
  for (auto& t : terms_) normalize_term(t);
  std::sort(terms_.begin(), terms_.end(), [](const Term& s, const Term& t) {
    if (s.factors.size() != t.factors.size()) return s.factors.size() < t.factors.size();
    for (std::size_t i = 0; i < s.factors.size(); ++i) {
      const auto& f = s.factors[i];
      const auto& g = t.factors[i];
      if (!same_base(f, g)) return base_less(f, g);
      if (f.power != g.power) return f.power < g.power;
    }
    return false;
  });
  std::vector<Term> out;
  auto same_term = [](const Term& s, const Term& t) {
    if (s.factors.size() != t.factors.size()) return false;
    for (std::size_t i = 0; i < s.factors.size(); ++i)
      if (!same_base(s.factors[i], t.factors[i]) || s.factors[i].power != t.factors[i].power)
        return false;
    return true;
  };
  for (const auto& t : terms_) {
    if (!out.empty() && same_term(out.back(), t))
      out.back().coef += t.coef;
    else
      out.push_back(t);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coef == 0.0; }),
            out.end());
  terms_ = std::move(out);
}

SymExpr SymExpr::constant(double c) {
  SymExpr e;
  if (c != 0.0) e.terms_.push_back({c, {}});
  return e;
}

SymExpr SymExpr::coord(int axis) {
  SymExpr e;
  Factor f;
  f.kind = Factor::Kind::X;
  f.axis = axis;
  f.power = 1;
  e.terms_.push_back({1.0, {f}});
  return e;
}

bool SymExpr::affine_of_one_axis(const SymExpr& e, int& axis, double& a, double& b) {
  axis = -1;
  a = 0.0;
  b = 0.0;
  for (const auto& t : e.terms_) {
    if (t.factors.empty()) {
      b += t.coef;
      continue;
    }
    if (t.factors.size() != 1) return false;
    const Factor& f = t.factors.front();
    if (f.kind != Factor::Kind::X || f.power != 1) return false;
    if (axis >= 0 && f.axis != axis) return false;
    axis = f.axis;
    a += t.coef;
  }
  if (axis < 0) return false;
  return true;
}

SymExpr SymExpr::sin(const SymExpr& arg) {
  int axis;
  double a, b;
  if (!affine_of_one_axis(arg, axis, a, b))
    throw std::invalid_argument("SymExpr::sin: argument must be affine in one coordinate");
  SymExpr e;
  Factor f;
  f.kind = Factor::Kind::Sin;
  f.axis = axis;
  f.power = 1;
  f.a = a;
  f.b = b;
  e.terms_.push_back({1.0, {f}});
  return e;
}

SymExpr SymExpr::cos(const SymExpr& arg) {
  int axis;
  double a, b;
  if (!affine_of_one_axis(arg, axis, a, b))
    throw std::invalid_argument("SymExpr::cos: argument must be affine in one coordinate");
  SymExpr e;
  Factor f;
  f.kind = Factor::Kind::Cos;
  f.axis = axis;
  f.power = 1;
  f.a = a;
  f.b = b;
  e.terms_.push_back({1.0, {f}});
  return e;
}

SymExpr SymExpr::operator+(const SymExpr& o) const {
  SymExpr e;
  e.terms_ = terms_;
  e.terms_.insert(e.terms_.end(), o.terms_.begin(), o.terms_.end());
  e.merge();
  return e;
}

SymExpr SymExpr::operator-(const SymExpr& o) const { return *this + o * -1.0; }

SymExpr SymExpr::operator*(const SymExpr& o) const {
  SymExpr e;
  for (const auto& s : terms_)
    for (const auto& t : o.terms_) {
      Term p;
      p.coef = s.coef * t.coef;
      p.factors = s.factors;
      p.factors.insert(p.factors.end(), t.factors.begin(), t.factors.end());
      e.terms_.push_back(std::move(p));
    }
  e.merge();
  return e;
}

SymExpr SymExpr::operator*(double s) const {
  SymExpr e = *this;
  for (auto& t : e.terms_) t.coef *= s;
  e.merge();
  return e;
}

SymExpr SymExpr::pow(int k) const {
  if (k < 0) throw std::invalid_argument("SymExpr::pow: negative exponent");
  SymExpr e = constant(1.0);
  for (int i = 0; i < k; ++i) e = e * (*this);
  return e;
}

SymExpr SymExpr::diff(int axis) const {
  SymExpr out;
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < t.factors.size(); ++k) {
      const Factor& f = t.factors[k];
      if (f.axis != axis) continue;
      Term d;
      d.coef = t.coef;
      for (std::size_t j = 0; j < t.factors.size(); ++j)
        if (j != k) d.factors.push_back(t.factors[j]);
      switch (f.kind) {
        case Factor::Kind::X: {
          d.coef *= f.power;
          if (f.power > 1) {
            Factor g = f;
            g.power = f.power - 1;
            d.factors.push_back(g);
          }
          break;
        }
        case Factor::Kind::Sin: {
          d.coef *= f.power * f.a;
          if (f.power > 1) {
            Factor g = f;
            g.power = f.power - 1;
            d.factors.push_back(g);
          }
          Factor c = f;
          c.kind = Factor::Kind::Cos;
          c.power = 1;
          d.factors.push_back(c);
          break;
        }
        case Factor::Kind::Cos: {
          d.coef *= -f.power * f.a;
          if (f.power > 1) {
            Factor g = f;
            g.power = f.power - 1;
            d.factors.push_back(g);
          }
          Factor s = f;
          s.kind = Factor::Kind::Sin;
          s.power = 1;
          d.factors.push_back(s);
          break;
        }
      }
      out.terms_.push_back(std::move(d));
    }
  }
  out.merge();
  return out;
}

double SymExpr::eval(const Vec3& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (const auto& f : t.factors) {
      double base = 0.0;
      switch (f.kind) {
        case Factor::Kind::X:
          base = x[f.axis];
          break;
        case Factor::Kind::Sin:
          base = std::sin(f.a * x[f.axis] + f.b);
          break;
        case Factor::Kind::Cos:
          base = std::cos(f.a * x[f.axis] + f.b);
          break;
      }
      double p = 1.0;
      for (int k = 0; k < f.power; ++k) p *= base;
      v *= p;
    }
    sum += v;
  }
  return sum;
}

CompiledExpr::CompiledExpr(const SymExpr& e) {
  auto base_index = [&](const SymExpr::Factor& f) {
    Base b;
    b.kind = (f.kind == SymExpr::Factor::Kind::X) ? 0 : (f.kind == SymExpr::Factor::Kind::Sin ? 1 : 2);
    b.axis = f.axis;
    b.a = f.a;
    b.b = f.b;
    for (std::size_t i = 0; i < bases_.size(); ++i) {
      const Base& o = bases_[i];
      if (o.kind == b.kind && o.axis == b.axis && o.a == b.a && o.b == b.b)
        return static_cast<int>(i);
    }
    bases_.push_back(b);
    return static_cast<int>(bases_.size() - 1);
  };
  for (const auto& t : e.terms_) {
    CTerm ct;
    ct.coef = t.coef;
    ct.begin = static_cast<int>(factors_.size());
    for (const auto& f : t.factors) factors_.push_back({base_index(f), f.power});
    ct.end = static_cast<int>(factors_.size());
    terms_.push_back(ct);
  }
  if (bases_.size() > 32)
    throw std::invalid_argument("CompiledExpr: too many distinct bases");
}

double CompiledExpr::eval(const Vec3& x) const {
  double vals[32];
  const std::size_t nb = bases_.size() < 32 ? bases_.size() : 32;
  for (std::size_t i = 0; i < nb; ++i) {
    const Base& b = bases_[i];
    switch (b.kind) {
      case 0:
        vals[i] = x[b.axis];
        break;
      case 1:
        vals[i] = std::sin(b.a * x[b.axis] + b.b);
        break;
      default:
        vals[i] = std::cos(b.a * x[b.axis] + b.b);
        break;
    }
  }
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (int k = t.begin; k < t.end; ++k) {
      const CFactor& f = factors_[static_cast<std::size_t>(k)];
      double p = vals[static_cast<std::size_t>(f.base)];
      for (int q = 1; q < f.power; ++q) p *= vals[static_cast<std::size_t>(f.base)];
      v *= p;
    }
    sum += v;
  }
  return sum;
}

SymVec3 SymVec3::curl() const {
  SymVec3 out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    out.c[static_cast<std::size_t>(i)] =
        c[static_cast<std::size_t>(k)].diff(j) - c[static_cast<std::size_t>(j)].diff(k);
  }
  return out;
}

SymExpr SymVec3::div() const { return c[0].diff(0) + c[1].diff(1) + c[2].diff(2); }

SymVec3 SymVec3::laplacian() const {
  SymVec3 out;
  for (int i = 0; i < 3; ++i)
    out.c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)].diff(0).diff(0) +
                                         c[static_cast<std::size_t>(i)].diff(1).diff(1) +
                                         c[static_cast<std::size_t>(i)].diff(2).diff(2);
  return out;
}

SymVec3 SymVec3::operator+(const SymVec3& o) const {
  return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]};
}

SymVec3 SymVec3::operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s}; }

SymVec3 sym_grad(const SymExpr& e) { return {e.diff(0), e.diff(1), e.diff(2)}; }

}  // namespace boxfem
