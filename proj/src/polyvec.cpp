// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/polyvec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace boxfem {

namespace {

bool cells_match(const Box3& a, const Box3& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.center[i] != b.center[i] || a.halfwidth[i] != b.halfwidth[i]) return false;
  }
  return true;
}

void require_same_cell(const PolyVec& a, const PolyVec& b) {
  if (!cells_match(a.cell(), b.cell()))
    throw std::invalid_argument("PolyVec: operands live on different cells");
}

/// Integral of xi^e over [-1,1].
double biunit_moment(int e) { return (e % 2 == 0) ? 2.0 / (e + 1) : 0.0; }

}  // namespace

PolyVec::PolyVec(int ncomp, const Box3& cell, std::vector<MonoIndex> monos, Eigen::MatrixXd coef)
    : ncomp_(ncomp), cell_(cell), monos_(std::move(monos)), coef_(std::move(coef)) {
  if (ncomp_ < 1 || ncomp_ > 3) throw std::invalid_argument("PolyVec: ncomp must be 1..3");
  if (coef_.rows() != ncomp_ || coef_.cols() != static_cast<Eigen::Index>(monos_.size()))
    throw std::invalid_argument("PolyVec: coefficient shape mismatch");
  // Canonical form: sorted, duplicate-free monomial list.
  std::vector<int> order(monos_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return monos_[static_cast<std::size_t>(i)] < monos_[static_cast<std::size_t>(j)]; });
  std::vector<MonoIndex> merged;
  Eigen::MatrixXd merged_coef(ncomp_, static_cast<Eigen::Index>(monos_.size()));
  Eigen::Index k = -1;
  for (int idx : order) {
    const auto& m = monos_[static_cast<std::size_t>(idx)];
    if (k >= 0 && merged[static_cast<std::size_t>(k)] == m) {
      merged_coef.col(k) += coef_.col(idx);
    } else {
      ++k;
      merged.push_back(m);
      merged_coef.col(k) = coef_.col(idx);
    }
  }
  monos_ = std::move(merged);
  coef_ = merged_coef.leftCols(k + 1);
}

PolyVec PolyVec::zero(int ncomp, const Box3& cell) {
  return PolyVec(ncomp, cell, {}, Eigen::MatrixXd::Zero(ncomp, 0));
}

PolyVec PolyVec::constant(const Box3& cell, double value) {
  Eigen::MatrixXd c(1, 1);
  c(0, 0) = value;
  return PolyVec(1, cell, {MonoIndex{}}, c);
}

PolyVec PolyVec::monomial(const Box3& cell, const MonoIndex& e) {
  Eigen::MatrixXd c(1, 1);
  c(0, 0) = 1.0;
  return PolyVec(1, cell, {e}, c);
}

PolyVec PolyVec::embed(const PolyVec& scalar, int comp, int ncomp) {
  if (scalar.ncomp() != 1) throw std::invalid_argument("embed: expected a scalar polynomial");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(ncomp, scalar.coef_.cols());
  c.row(comp) = scalar.coef_.row(0);
  return PolyVec(ncomp, scalar.cell(), scalar.monos_, std::move(c));
}

PolyVec PolyVec::position(const Box3& cell) {
  std::vector<MonoIndex> monos = {MonoIndex{}, MonoIndex{1, 0, 0}, MonoIndex{0, 1, 0},
                                  MonoIndex{0, 0, 1}};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 4);
  for (int i = 0; i < 3; ++i) {
    c(i, 0) = cell.center[i];
    c(i, 1 + i) = cell.halfwidth[i];
  }
  return PolyVec(3, cell, std::move(monos), std::move(c));
}

int PolyVec::max_total_degree() const {
  int d = 0;
  for (const auto& m : monos_) d = std::max(d, m.total_degree());
  return d;
}

PolyVec PolyVec::operator+(const PolyVec& o) const {
  require_same_cell(*this, o);
  if (ncomp_ != o.ncomp_) throw std::invalid_argument("PolyVec+: ncomp mismatch");
  std::vector<MonoIndex> monos = monos_;
  monos.insert(monos.end(), o.monos_.begin(), o.monos_.end());
  Eigen::MatrixXd c(ncomp_, coef_.cols() + o.coef_.cols());
  c << coef_, o.coef_;
  return PolyVec(ncomp_, cell_, std::move(monos), std::move(c));
}

PolyVec PolyVec::operator-(const PolyVec& o) const { return *this + o * -1.0; }

PolyVec PolyVec::operator*(double s) const {
  PolyVec r = *this;
  r.coef_ *= s;
  return r;
}

PolyVec& PolyVec::operator*=(double s) {
  coef_ *= s;
  return *this;
}

PolyVec PolyVec::multiply(const PolyVec& scalar) const {
  require_same_cell(*this, scalar);
  if (scalar.ncomp_ != 1) throw std::invalid_argument("multiply: second factor must be scalar");
  std::map<MonoIndex, Eigen::VectorXd> acc;
  for (Eigen::Index a = 0; a < coef_.cols(); ++a) {
    for (Eigen::Index b = 0; b < scalar.coef_.cols(); ++b) {
      MonoIndex m(monos_[static_cast<std::size_t>(a)].e[0] + scalar.monos_[static_cast<std::size_t>(b)].e[0],
                  monos_[static_cast<std::size_t>(a)].e[1] + scalar.monos_[static_cast<std::size_t>(b)].e[1],
                  monos_[static_cast<std::size_t>(a)].e[2] + scalar.monos_[static_cast<std::size_t>(b)].e[2]);
      auto it = acc.find(m);
      if (it == acc.end()) it = acc.emplace(m, Eigen::VectorXd::Zero(ncomp_)).first;
      it->second += coef_.col(a) * scalar.coef_(0, b);
    }
  }
  std::vector<MonoIndex> monos;
  Eigen::MatrixXd c(ncomp_, static_cast<Eigen::Index>(acc.size()));
  Eigen::Index j = 0;
  for (const auto& [m, v] : acc) {
    monos.push_back(m);
    c.col(j++) = v;
  }
  return PolyVec(ncomp_, cell_, std::move(monos), std::move(c));
}

PolyVec PolyVec::cross(const PolyVec& o) const {
  require_same_cell(*this, o);
  if (ncomp_ != 3 || o.ncomp_ != 3) throw std::invalid_argument("cross: expected 3-component operands");
  // (a x b)_i = a_j b_k - a_k b_j
  PolyVec r = PolyVec::zero(3, cell_);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    PolyVec t = component(j).multiply(o.component(k)) - component(k).multiply(o.component(j));
    r = r + PolyVec::embed(t, i, 3);
  }
  return r;
}

PolyVec PolyVec::cross(const Vec3& b) const {
  if (ncomp_ != 3) throw std::invalid_argument("cross: expected a 3-component polynomial");
  Eigen::MatrixXd c(3, coef_.cols());
  for (Eigen::Index col = 0; col < coef_.cols(); ++col) {
    const double a0 = coef_(0, col), a1 = coef_(1, col), a2 = coef_(2, col);
    c(0, col) = a1 * b[2] - a2 * b[1];
    c(1, col) = a2 * b[0] - a0 * b[2];
    c(2, col) = a0 * b[1] - a1 * b[0];
  }
  return PolyVec(3, cell_, monos_, std::move(c));
}

PolyVec PolyVec::dot(const PolyVec& o) const {
  require_same_cell(*this, o);
  if (ncomp_ != o.ncomp_) throw std::invalid_argument("dot: ncomp mismatch");
  PolyVec r = PolyVec::zero(1, cell_);
  for (int i = 0; i < ncomp_; ++i) r = r + component(i).multiply(o.component(i));
  return r;
}

PolyVec PolyVec::component(int i) const {
  Eigen::MatrixXd c = coef_.row(i);
  return PolyVec(1, cell_, monos_, std::move(c));
}

PolyVec PolyVec::partial(int axis) const {
  const double scale = 1.0 / cell_.halfwidth[axis];
  std::vector<MonoIndex> monos;
  Eigen::MatrixXd c(ncomp_, coef_.cols());
  Eigen::Index j = 0;
  for (Eigen::Index a = 0; a < coef_.cols(); ++a) {
    MonoIndex m = monos_[static_cast<std::size_t>(a)];
    if (m.e[static_cast<std::size_t>(axis)] == 0) continue;
    const double f = m.e[static_cast<std::size_t>(axis)] * scale;
    m.e[static_cast<std::size_t>(axis)] -= 1;
    monos.push_back(m);
    c.col(j++) = coef_.col(a) * f;
  }
  return PolyVec(ncomp_, cell_, std::move(monos), c.leftCols(j));
}

PolyVec PolyVec::grad() const {
  if (ncomp_ != 1) throw std::invalid_argument("grad: expected a scalar polynomial");
  PolyVec r = PolyVec::zero(3, cell_);
  for (int i = 0; i < 3; ++i) r = r + PolyVec::embed(partial(i), i, 3);
  return r;
}

PolyVec PolyVec::curl() const {
  if (ncomp_ != 3) throw std::invalid_argument("curl: expected a 3-component polynomial");
  PolyVec r = PolyVec::zero(3, cell_);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    PolyVec t = component(k).partial(j) - component(j).partial(k);
    r = r + PolyVec::embed(t, i, 3);
  }
  return r;
}

PolyVec PolyVec::div() const {
  if (ncomp_ != 3) throw std::invalid_argument("div: expected a 3-component polynomial");
  PolyVec r = PolyVec::zero(1, cell_);
  for (int i = 0; i < 3; ++i) r = r + component(i).partial(i);
  return r;
}

Vec3 PolyVec::eval(const Vec3& x) const { return eval_local(cell_.to_local(x)); }

Vec3 PolyVec::eval_local(const Vec3& xi) const {
  int maxdeg = 0;
  for (const auto& m : monos_)
    for (int i = 0; i < 3; ++i) maxdeg = std::max(maxdeg, m.e[static_cast<std::size_t>(i)]);
  std::array<std::vector<double>, 3> pw;
  for (int i = 0; i < 3; ++i) {
    pw[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(maxdeg) + 1);
    pw[static_cast<std::size_t>(i)][0] = 1.0;
    for (int d = 1; d <= maxdeg; ++d)
      pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
          pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(d - 1)] * xi[i];
  }
  Vec3 out;
  for (Eigen::Index a = 0; a < coef_.cols(); ++a) {
    const auto& m = monos_[static_cast<std::size_t>(a)];
    const double v = pw[0][static_cast<std::size_t>(m.e[0])] * pw[1][static_cast<std::size_t>(m.e[1])] *
                     pw[2][static_cast<std::size_t>(m.e[2])];
    for (int c = 0; c < ncomp_; ++c) out[c] += coef_(c, a) * v;
  }
  return out;
}

double PolyVec::eval_scalar(const Vec3& x) const { return eval(x)[0]; }

Eigen::VectorXd PolyVec::integral() const {
  const double jac = cell_.halfwidth[0] * cell_.halfwidth[1] * cell_.halfwidth[2];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ncomp_);
  for (Eigen::Index a = 0; a < coef_.cols(); ++a) {
    const auto& m = monos_[static_cast<std::size_t>(a)];
    const double w = jac * biunit_moment(m.e[0]) * biunit_moment(m.e[1]) * biunit_moment(m.e[2]);
    if (w != 0.0) out += coef_.col(a) * w;
  }
  return out;
}

double PolyVec::inner(const PolyVec& o) const { return dot(o).integral()(0); }

double PolyVec::l2_norm() const { return std::sqrt(std::max(0.0, inner(*this))); }

void PolyVec::prune() {
  std::vector<MonoIndex> monos;
  Eigen::MatrixXd c(ncomp_, coef_.cols());
  Eigen::Index j = 0;
  for (Eigen::Index a = 0; a < coef_.cols(); ++a) {
    if (coef_.col(a).cwiseAbs().maxCoeff() == 0.0) continue;
    monos.push_back(monos_[static_cast<std::size_t>(a)]);
    c.col(j++) = coef_.col(a);
  }
  monos_ = std::move(monos);
  coef_ = c.leftCols(j);
}

PolyVec PolyVec::translated(const Box3& new_cell) const {
  for (int a = 0; a < 3; ++a)
    if (new_cell.halfwidth[a] != cell_.halfwidth[a])
      throw std::invalid_argument("PolyVec::translated: half-widths differ");
  return PolyVec(ncomp_, new_cell, monos_, coef_);
}

PolyVec diff(const PolyVec& p, DiffOp op) {
  switch (op) {
    case DiffOp::grad:
      return p.grad();
    case DiffOp::curl:
      return p.curl();
    case DiffOp::div:
      return p.div();
    case DiffOp::partial1:
      return p.partial(0);
    case DiffOp::partial2:
      return p.partial(1);
    case DiffOp::partial3:
      return p.partial(2);
  }
  throw std::invalid_argument("diff: unknown operator");
}

StackedPolys stack_polys(const std::vector<PolyVec>& polys) {
  StackedPolys s;
  if (polys.empty()) return s;
  s.ncomp = polys.front().ncomp();
  s.cell = polys.front().cell();
  std::map<MonoIndex, int> index;
  for (const auto& p : polys) {
    if (p.ncomp() != s.ncomp) throw std::invalid_argument("stack_polys: mixed ncomp");
    for (const auto& m : p.monomials()) index.emplace(m, 0);
  }
  int k = 0;
  for (auto& [m, idx] : index) {
    idx = k++;
    s.monos.push_back(m);
  }
  const int nm = k;
  s.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(polys.size()),
                                 static_cast<Eigen::Index>(s.ncomp * nm));
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const auto& p = polys[i];
    for (Eigen::Index a = 0; a < p.coef().cols(); ++a) {
      const int col = index.at(p.monomials()[static_cast<std::size_t>(a)]);
      for (int c = 0; c < s.ncomp; ++c)
        s.rows(static_cast<Eigen::Index>(i), c * nm + col) += p.coef()(c, a);
    }
  }
  return s;
}

PolyVec unstack_row(const StackedPolys& s, const Eigen::VectorXd& row) {
  const int nm = static_cast<int>(s.monos.size());
  Eigen::MatrixXd c(s.ncomp, nm);
  for (int comp = 0; comp < s.ncomp; ++comp)
    for (int a = 0; a < nm; ++a) c(comp, a) = row(comp * nm + a);
  PolyVec p(s.ncomp, s.cell, s.monos, std::move(c));
  p.prune();
  return p;
}

}  // namespace boxfem
