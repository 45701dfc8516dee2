// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "boxfem/assembly.hpp"
#include "boxfem/manufactured.hpp"

namespace boxfem {

enum class Problem { quadcurl, brinkman };

struct RunConfig {
  Problem problem = Problem::quadcurl;
  int order = 2;
  int levels = 3;                 // meshes n = 2, 4, ..., 2^levels on the unit cube
  std::vector<double> params;     // mu (quadcurl) or nu (brinkman) sweep values
  double gamma_or_alpha = 1.0;    // gamma (quadcurl) or alpha (brinkman)
  double tol = 1e-10;
  int max_iterations = 0;         // 0 = automatic
  std::string out_prefix;         // CSV path prefix; empty writes no files

  void validate() const;
};

struct ErrorRecord {
  double h = 0.0;
  int dofs = 0;
  double err_l2 = 0.0;         // || u - u_h ||
  double err_curl = 0.0;       // || curl(u - u_h) ||
  double err_h1_broken = 0.0;  // | curl(u-u_h) |_{1,h} (quadcurl) or | u-u_h |_{1,h} (brinkman)
  double err_triple = 0.0;     // parameter-weighted energy norm
  double err_p = 0.0;          // || p - p_h ||
  double aux = 0.0;            // || p_h || (quadcurl) or || div u_h || (brinkman)
  int iterations = 0;
  double residual = 0.0;
};

/// Experimental order of convergence per level: order_k = log2(e_{k-1}/e_k);
/// NaN marks the first level and undefined entries (zero coarse error).
std::vector<double> eoc(const std::vector<double>& errors);

/// Solve one parameter value across all levels.
std::vector<ErrorRecord> run_quadcurl(const RunConfig& config, double mu, std::ostream* log);
std::vector<ErrorRecord> run_brinkman(const RunConfig& config, double nu, std::ostream* log);

ErrorRecord compute_errors(const Mesh& mesh, Problem problem, double mu_or_nu,
                           double gamma_or_alpha, const FeSpace& velocity,
                           const Eigen::VectorXd& u_coef, const FeSpace& pressure,
                           const Eigen::VectorXd& p_coef, const ExactSolution& exact);

/// Global L2 interpolation errors of the canonical interpolant of `v` for
/// one family across mesh levels; returns (h, error) pairs.
std::vector<std::pair<double, double>> interpolation_errors(Family family, int r, int levels,
                                                            const VectorField& v);

void write_csv(const std::string& path, const std::vector<ErrorRecord>& records);
std::string format_table(const std::vector<ErrorRecord>& records);

/// Largest |u| over boundary quadrature points (pre-run check that a
/// manufactured velocity really satisfies the homogeneous BC).
double boundary_trace_max(const Mesh& mesh, const VectorField& v, int degree = 8);

}  // namespace boxfem
