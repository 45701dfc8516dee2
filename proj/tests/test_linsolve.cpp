#include <random>

#include "boxfem/linsolve.hpp"
#include "doctest.h"

using namespace boxfem;

namespace {
SparseMatrix dense_to_sparse(const Eigen::MatrixXd& a) {
  std::vector<Triplet> t;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) t.push_back({i, j, a(i, j)});
  return SparseMatrix::from_triplets(static_cast<int>(a.rows()), static_cast<int>(a.cols()), t);
}
}  // namespace

TEST_CASE("sparse matrix basics") {
  std::vector<Triplet> t = {{0, 1, 2.0}, {0, 1, 3.0}, {1, 0, 4.0}, {2, 2, 1.0}, {1, 2, 0.0}};
  SparseMatrix m = SparseMatrix::from_triplets(3, 3, t);
  CHECK(m.nonzeros() == 3);  // duplicates summed, explicit zeros dropped
  Eigen::VectorXd x(3);
  x << 1, 2, 3;
  Eigen::VectorXd y = m.multiply(x);
  CHECK(y(0) == doctest::Approx(10.0));
  CHECK(y(1) == doctest::Approx(4.0));
  CHECK(y(2) == doctest::Approx(3.0));
  CHECK_FALSE(m.is_symmetric());
}

TEST_CASE("minres solves the identity immediately") {
  SparseMatrix eye = SparseMatrix::identity(5);
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, 4;
  SolveResult r = solve_sym_indef(eye, b);
  CHECK((r.x - b).norm() < 1e-12);
  CHECK(r.iterations <= 2);
}

TEST_CASE("minres matches a dense factorization on a random SPD system") {
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  const int n = 50;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::MatrixXd a = g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = gauss(rng);

  SolveResult r = solve_sym_indef(dense_to_sparse(a), b, 1e-12);
  const Eigen::VectorXd xd = dense_solve(a, b);
  CHECK((r.x - xd).norm() / xd.norm() < 1e-8);
  CHECK(r.rel_residual <= 1e-12);
}

TEST_CASE("minres handles symmetric indefinite saddle systems") {
  std::mt19937 rng(6);
  std::normal_distribution<double> gauss;
  const int n = 40, m = 12;
  Eigen::MatrixXd g(n, n), bb(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    for (int j = 0; j < m; ++j) bb(i, j) = gauss(rng);
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = g * g.transpose() + Eigen::MatrixXd::Identity(n, n);
  k.topRightCorner(n, m) = bb;
  k.bottomLeftCorner(m, n) = bb.transpose();
  Eigen::VectorXd rhs(n + m);
  for (int i = 0; i < n + m; ++i) rhs(i) = gauss(rng);

  SolveResult r = solve_sym_indef(dense_to_sparse(k), rhs, 1e-11);
  CHECK((k * r.x - rhs).norm() / rhs.norm() <= 1e-11);
}

TEST_CASE("minres rejects asymmetric input") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 0, 1;
  Eigen::VectorXd b(2);
  b << 1, 1;
  CHECK_THROWS_AS(solve_sym_indef(dense_to_sparse(a), b), std::invalid_argument);
}

TEST_CASE("minres is deterministic") {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  const int n = 30;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::MatrixXd a = g + g.transpose();
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = gauss(rng);
  SparseMatrix s = dense_to_sparse(a);
  SolveResult r1 = solve_sym_indef(s, b, 1e-10);
  SolveResult r2 = solve_sym_indef(s, b, 1e-10);
  CHECK((r1.x - r2.x).norm() == 0.0);
  CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("dense solve flags singular matrices") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 4;
  Eigen::VectorXd b(2);
  b << 1, 1;
  CHECK_THROWS_AS(dense_solve(a, b), SingularityError);
}

TEST_CASE("smallest eigenvalue") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
  d.diagonal() << 3.0, -1.5, 2.0, 7.0;
  CHECK(dense_eigs_smallest(d) == doctest::Approx(-1.5).epsilon(1e-12));

  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  CHECK(dense_eigs_smallest(a) == doctest::Approx(1.0).epsilon(1e-10));

  std::mt19937 rng(9);
  std::normal_distribution<double> gauss;
  const int n = 60;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  CHECK(dense_eigs_smallest(sym) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
}

TEST_CASE("rank, gap, and kernel") {
  Eigen::MatrixXd a(3, 4);
  a << 1, 0, 0, 1,  //
      0, 1, 0, 1,   //
      1, 1, 0, 2;   // row3 = row1 + row2
  double gap = 0.0;
  CHECK(numerical_rank(a, 1e-8, &gap) == 2);
  CHECK(gap > 1e6);
  Eigen::MatrixXd k = kernel_basis(a);
  CHECK(k.cols() == 2);
  CHECK((a * k).cwiseAbs().maxCoeff() < 1e-12);
}
