// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#include "boxfem/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace boxfem {

namespace {

/// Plain MINRES on an already-scaled system, starting from x = 0.
/// Returns the recurrence residual estimate; `iterations` accumulates.
Eigen::VectorXd minres_core(const SparseMatrix& a, const Eigen::VectorXd& b, double rel_tol,
                            int maxit, int& iterations, double& rec_rel_residual) {
  const int n = static_cast<int>(b.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double beta1 = b.norm();
  rec_rel_residual = 0.0;
  if (beta1 == 0.0) return x;

  Eigen::VectorXd r1 = b, r2 = b, y = b;
  double beta = beta1, oldb = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0, dbar = 0.0, epsln = 0.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n), w2 = Eigen::VectorXd::Zero(n);

  // The residual estimate decreases monotonically; a window with almost no
  // contraction means the attainable floor was reached.
  constexpr int stall_window = 1500;
  double stall_mark = phibar;

  for (int itn = 1; itn <= maxit; ++itn) {
    const double s = 1.0 / beta;
    const Eigen::VectorXd v = y * s;
    y = a.multiply(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = y.norm();

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::sqrt(gbar * gbar + beta * beta);
    gamma = std::max(gamma, std::numeric_limits<double>::epsilon());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    ++iterations;
    rec_rel_residual = phibar / beta1;
    if (rec_rel_residual <= rel_tol) break;
    if (beta <= 1e-290) break;  // Krylov space exhausted
    if (itn % stall_window == 0) {
      if (phibar > 0.7 * stall_mark) break;
      stall_mark = phibar;
    }
  }
  return x;
}

}  // namespace

SolveResult solve_sym_indef(const SparseMatrix& a, const Eigen::VectorXd& b, double tol, int maxit,
                            const Eigen::VectorXd* scaling) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw std::invalid_argument("solve_sym_indef: dimension mismatch");
  if (!b.allFinite()) throw std::invalid_argument("solve_sym_indef: right-hand side not finite");
  if (!a.is_symmetric(1e-10)) throw std::invalid_argument("solve_sym_indef: matrix not symmetric");

  const int n = a.rows();
  Eigen::VectorXd d(n);
  if (scaling) {
    if (scaling->size() != n) throw std::invalid_argument("solve_sym_indef: bad scaling size");
    for (int i = 0; i < n; ++i) d(i) = std::sqrt(std::max(std::abs((*scaling)(i)), 1e-300));
  } else {
    const Eigen::VectorXd diag = a.diagonal();
    const Eigen::VectorXd rmax = a.row_max_abs();
    for (int i = 0; i < n; ++i) {
      const double base = std::abs(diag(i)) > 0.0 ? std::abs(diag(i)) : rmax(i);
      d(i) = std::sqrt(std::max(base, 1e-300));
    }
  }

  const SparseMatrix as = a.scaled(d);
  const Eigen::VectorXd bs = b.cwiseQuotient(d);
  if (maxit <= 0) maxit = std::min(std::max(2000, 8 * n), 200000);

  const double bnorm = b.norm();
  SolveResult out;
  out.x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) return out;

  // Solve, then re-check the true unscaled residual; restart on the residual
  // equation if the recurrence estimate was optimistic.
  SolveResult best;
  best.rel_residual = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 4; ++pass) {
    const Eigen::VectorXd r = b - a.multiply(out.x);
    const double rel = r.norm() / bnorm;
    if (rel <= tol) {
      out.rel_residual = rel;
      return out;
    }
    if (rel < best.rel_residual) best = SolveResult{out.x, rel, out.iterations};
    double rec = 0.0;
    const Eigen::VectorXd rs = r.cwiseQuotient(d);
    const double inner_tol = tol * bnorm / std::max(r.norm(), 1e-300) * 0.25;
    Eigen::VectorXd dx = minres_core(as, rs, std::max(inner_tol, 1e-16), maxit, out.iterations, rec);
    out.x += dx.cwiseQuotient(d);
  }
  const Eigen::VectorXd r = b - a.multiply(out.x);
  const double rel = r.norm() / bnorm;
  out.rel_residual = rel;
  if (rel <= tol) return out;
  if (rel < best.rel_residual) best = out;
  char msg[128];
  std::snprintf(msg, sizeof msg, "solve_sym_indef: no convergence to tol=%.3e, best residual %.3e",
                tol, best.rel_residual);
  throw IterationLimitError(msg, best);
}

Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw std::invalid_argument("dense_solve: dimension mismatch");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd& r = qr.matrixR();
  const double rmax = std::abs(r(0, 0));
  const double rmin = std::abs(r(a.rows() - 1, a.cols() - 1));
  if (rmax == 0.0 || rmin < 1e-14 * rmax)
    throw SingularityError("dense_solve: matrix singular to working precision");
  return qr.solve(b);
}

double dense_eigs_smallest(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dense_eigs_smallest: square input required");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(a.cwiseAbs().maxCoeff(), 1e-300))
    throw std::invalid_argument("dense_eigs_smallest: symmetric input required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw SingularityError("dense_eigs_smallest: eigensolver failed");
  const double lmin = es.eigenvalues()(0);
  const double scale =
      std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(a.rows() - 1)));

  // Shifted inverse iteration cross-check. The shift sits just below the
  // computed eigenvalue, so the iteration contracts sharply even when the
  // low end of the spectrum is clustered (a nearly singular factorization
  // is expected and harmless here thanks to pivoting).
  const double delta = std::max(1e-9 * scale, 1e-14);
  const double sigma = lmin - delta;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a - sigma * Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  Eigen::VectorXd v(a.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 1.0 + 0.37 * std::sin(1.0 + 2.7 * i);
  v.normalize();
  double rho = lmin;
  for (int it = 0; it < 12; ++it) {
    Eigen::VectorXd w = lu.solve(v);
    const double nrm = w.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    v = w / nrm;
    const double rho_new = v.dot(a * v);
    if (it > 1 && std::abs(rho_new - rho) <= 1e-13 * std::max(scale, 1.0)) {
      rho = rho_new;
      break;
    }
    rho = rho_new;
  }
  if (std::abs(rho - lmin) > 1e-8 * std::max(scale, 1e-12))
    throw SingularityError("dense_eigs_smallest: cross-check failed");
  return lmin;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd();
  Eigen::MatrixXd m = (a.rows() >= a.cols()) ? a : Eigen::MatrixXd(a.transpose());
  if (m.rows() > m.cols() + 8) {
    // Compress tall matrices: the R factor has the same singular values.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    m = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

int numerical_rank(const Eigen::MatrixXd& a, double rel_tol, double* gap) {
  const Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0 || sv(0) == 0.0) {
    if (gap) *gap = std::numeric_limits<double>::infinity();
    return 0;
  }
  const double cut = rel_tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  if (gap) {
    if (rank == 0)
      *gap = std::numeric_limits<double>::infinity();
    else if (rank < sv.size() && sv(rank) > 0.0)
      *gap = sv(rank - 1) / sv(rank);
    else if (rank < sv.size())
      *gap = std::numeric_limits<double>::infinity();
    else
      *gap = sv(rank - 1) / cut;  // full rank: margin above the cutoff
  }
  return rank;
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& a, double rel_tol) {
  const int n = static_cast<int>(a.cols());
  Eigen::MatrixXd m = a;
  if (m.rows() > m.cols() + 8) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    m = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(0) > 0.0 && sv(i) > rel_tol * sv(0)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace boxfem
