// Test-side oracles, kept independent of the library's quadrature path.
#pragma once

#include <array>
#include <map>

#include "boxfem/assembly.hpp"
#include "boxfem/polyvec.hpp"
#include "boxfem/refelem.hpp"

namespace oracle {

/// integral of t^e over [-1,1]
inline double mono_integral_1d(int e) { return (e % 2 == 0) ? 2.0 / (e + 1) : 0.0; }

/// Exact integral over the cell of the product of two polynomials
/// (componentwise dot), via coefficient convolution and closed-form monomial
/// moments. This never touches the library's Gauss rules.
inline double inner(const boxfem::PolyVec& a, const boxfem::PolyVec& b) {
  if (a.ncomp() != b.ncomp()) throw std::invalid_argument("oracle::inner: ncomp mismatch");
  std::map<std::array<int, 3>, double> prod;
  for (int c = 0; c < a.ncomp(); ++c) {
    for (std::size_t i = 0; i < a.monomials().size(); ++i) {
      const double ca = a.coef()(c, static_cast<Eigen::Index>(i));
      if (ca == 0.0) continue;
      for (std::size_t j = 0; j < b.monomials().size(); ++j) {
        const double cb = b.coef()(c, static_cast<Eigen::Index>(j));
        if (cb == 0.0) continue;
        std::array<int, 3> e;
        for (int k = 0; k < 3; ++k)
          e[static_cast<std::size_t>(k)] = a.monomials()[i].e[static_cast<std::size_t>(k)] +
                                           b.monomials()[j].e[static_cast<std::size_t>(k)];
        prod[e] += ca * cb;
      }
    }
  }
  const auto& h = a.cell().halfwidth;
  double total = 0.0;
  for (const auto& [e, c] : prod)
    total += c * mono_integral_1d(e[0]) * mono_integral_1d(e[1]) * mono_integral_1d(e[2]);
  return total * h[0] * h[1] * h[2];
}

/// Oracle local matrix: differentiate the nodal polynomials symbolically and
/// integrate the products with the closed-form monomial integrator above.
/// Entirely independent of the Gauss-quadrature path in local_matrix().
inline Eigen::MatrixXd oracle_matrix(boxfem::FormKind kind, const boxfem::ElementDef& trial,
                                     const boxfem::ElementDef& test) {
  using boxfem::FormKind;
  using boxfem::PolyVec;
  auto derived = [&](const boxfem::ElementDef& e, bool is_trial) {
    std::vector<PolyVec> out;
    for (const auto& p : e.nodal) {
      switch (kind) {
        case FormKind::curl_mass:
          out.push_back(p.curl());
          break;
        case FormKind::div_div:
          out.push_back(p.div());
          break;
        case FormKind::b1_v_gradq:
          out.push_back(is_trial ? p.grad() : p);
          break;
        case FormKind::b2_divv_q:
          out.push_back(is_trial ? p.div() : p);
          break;
        default:
          out.push_back(p);
          break;
      }
    }
    return out;
  };
  if (kind == FormKind::grad_stiffness || kind == FormKind::gradcurl_stiffness) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(test.ndof(), trial.ndof());
    for (int i = 0; i < test.ndof(); ++i)
      for (int j = 0; j < trial.ndof(); ++j)
        for (int d = 0; d < 3; ++d) {
          const PolyVec pi = (kind == FormKind::grad_stiffness)
                                 ? test.nodal[static_cast<std::size_t>(i)].partial(d)
                                 : test.nodal[static_cast<std::size_t>(i)].curl().partial(d);
          const PolyVec pj = (kind == FormKind::grad_stiffness)
                                 ? trial.nodal[static_cast<std::size_t>(j)].partial(d)
                                 : trial.nodal[static_cast<std::size_t>(j)].curl().partial(d);
          m(i, j) += inner(pi, pj);
        }
    return m;
  }
  const auto pt = derived(trial, true);
  const auto ps = derived(test, false);
  Eigen::MatrixXd m(test.ndof(), trial.ndof());
  for (int i = 0; i < test.ndof(); ++i)
    for (int j = 0; j < trial.ndof(); ++j)
      m(i, j) = inner(ps[static_cast<std::size_t>(i)], pt[static_cast<std::size_t>(j)]);
  return m;
}

}  // namespace oracle
