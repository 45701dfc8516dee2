// Copyright (c) the boxfem authors.
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark driver: convergence studies for the two mixed schemes, the
// structural audit of the discrete complexes, and interpolation-only rate
// tables. CSV files are written one per parameter value.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "boxfem/bench.hpp"
#include "boxfem/complexcheck.hpp"

using namespace boxfem;

namespace {

std::string param_tag(double v) {
  std::ostringstream os;
  os << v;
  std::string s = os.str();
  for (auto& c : s)
    if (c == '.') c = 'p';
  return s;
}

int run_problem(Problem problem, RunConfig cfg, const std::string& pname) {
  cfg.problem = problem;
  cfg.validate();
  int failures = 0;
  for (double param : cfg.params) {
    std::cout << "== " << (problem == Problem::quadcurl ? "quadcurl" : "brinkman") << " r="
              << cfg.order << " " << pname << "=" << param
              << (problem == Problem::quadcurl ? " gamma=" : " alpha=") << cfg.gamma_or_alpha
              << " ==\n";
    std::vector<ErrorRecord> recs;
    try {
      recs = (problem == Problem::quadcurl) ? run_quadcurl(cfg, param, &std::cout)
                                            : run_brinkman(cfg, param, &std::cout);
    } catch (const std::exception& e) {
      std::cout << "run failed: " << e.what() << "\n";
      ++failures;
      continue;
    }
    std::cout << format_table(recs);
    if (!cfg.out_prefix.empty()) {
      const std::string path = cfg.out_prefix + "_" + pname + param_tag(param) + ".csv";
      write_csv(path, recs);
      std::cout << "wrote " << path << "\n";
    }
  }
  return failures;
}

std::vector<VectorField> audit_samples(int count) {
  // deterministic smooth trig/polynomial mixtures
  std::vector<VectorField> out;
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < count; ++k) {
    const double a = 1.0 + 0.5 * k, b = 0.3 * k, c = 0.7 + 0.2 * k;
    const SymExpr x = SymExpr::coord(0), y = SymExpr::coord(1), z = SymExpr::coord(2);
    SymVec3 v(SymExpr::sin(x * (pi * a)) * SymExpr::cos(y * pi + SymExpr::constant(b)) + z * z * c,
              SymExpr::cos(x * pi) * SymExpr::sin(z * (pi * a)) + x * y * 0.5,
              SymExpr::sin(y * (pi * c)) * SymExpr::sin(z * pi) + x * x * 0.25 - y * 1.5);
    out.push_back(to_field(v));
  }
  return out;
}

int run_audit(const std::vector<int>& orders, const std::string& out) {
  int failures = 0;
  std::ostringstream csv;
  csv << "mesh,r,bc,complex,slot,dim,rank,kernel,image,verdict\n";
  const Box3 cube({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5});
  const std::array<std::array<int, 3>, 3> meshes = {{{1, 1, 1}, {2, 2, 2}, {2, 3, 2}}};
  for (int r : orders) {
    for (const auto& n : meshes) {
      const Mesh mesh = build_box_mesh(cube, n[0], n[1], n[2]);
      for (Bc bc : {Bc::none, Bc::homogeneous}) {
        for (bool enriched : {true, false}) {
          const std::string tag = std::to_string(n[0]) + "x" + std::to_string(n[1]) + "x" +
                                  std::to_string(n[2]) + " r=" + std::to_string(r) +
                                  (bc == Bc::homogeneous ? " bc" : " free") +
                                  (enriched ? " enriched" : " conforming");
          try {
            const ExactnessReport rep = check_exactness(mesh, r, bc, enriched);
            std::cout << (rep.pass ? "pass  " : "FAIL  ") << tag << "\n";
            if (!rep.pass) {
              std::cout << rep.table();
              ++failures;
            }
            for (const auto& s : rep.slots)
              csv << n[0] << "x" << n[1] << "x" << n[2] << "," << r << ","
                  << (bc == Bc::homogeneous ? "homogeneous" : "none") << ","
                  << (enriched ? "enriched" : "conforming") << "," << s.name << "," << s.dim << ","
                  << s.out_rank << "," << s.kernel_dim << "," << s.image_in_dim << ","
                  << (s.pass ? "pass" : "fail") << "\n";
          } catch (const std::exception& e) {
            std::cout << "FAIL  " << tag << ": " << e.what() << "\n";
            ++failures;
          }
        }
      }
    }
    const Mesh mesh = build_box_mesh(cube, 2, 2, 2);
    const CommutingReport rep = check_commuting(mesh, r, audit_samples(5));
    std::cout << "commuting residuals r=" << r << ": div(enriched)=" << rep.div_enriched
              << " div(conforming)=" << rep.div_conforming << " split=" << rep.enriched_split
              << " bubble=" << rep.bubble_commute << (rep.max() <= 1e-9 ? "  pass" : "  FAIL")
              << "\n";
    if (rep.max() > 1e-9) ++failures;
  }
  if (!out.empty()) {
    std::ofstream os(out);
    os << csv.str();
    std::cout << "wrote " << out << "\n";
  }
  return failures;
}

int run_interp(int order, int levels) {
  auto print = [](const char* name, const std::vector<std::pair<double, double>>& errs) {
    std::cout << name << "\n      h      err_l2   eoc\n";
    for (std::size_t i = 0; i < errs.size(); ++i) {
      std::cout << "  " << errs[i].first << "  " << errs[i].second;
      if (i > 0) std::cout << "   " << std::log2(errs[i - 1].second / errs[i].second);
      std::cout << "\n";
    }
  };
  const ExactSolution e1 = make_quadcurl_example(1.0, 1.0);
  const ExactSolution e2 = make_brinkman_example(1.0, 1.0);
  print("grad-curl interpolant on the quad-curl example field:",
        interpolation_errors(Family::SPlus1, order, levels, e1.velocity()));
  print("H(div) interpolant on the Brinkman example field:",
        interpolation_errors(Family::SPlus2, order, levels, e2.velocity()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmarks for the nonconforming cubical-element pair"};
  app.require_subcommand(1);

  RunConfig qc_cfg, bk_cfg;
  qc_cfg.params = {1.0};
  bk_cfg.params = {1.0};

  auto* quad = app.add_subcommand("quadcurl", "convergence study for the -curl lap curl scheme");
  quad->add_option("--order", qc_cfg.order, "element order r")->check(CLI::Range(2, 3));
  quad->add_option("--levels", qc_cfg.levels, "number of uniform refinements (h = 1/2 ... 1/2^N)");
  quad->add_option("--mu", qc_cfg.params, "fourth-order coefficient(s), repeatable");
  quad->add_option("--gamma", qc_cfg.gamma_or_alpha, "zeroth-order coefficient");
  quad->add_option("--tol", qc_cfg.tol, "solver tolerance");
  quad->add_option("--out", qc_cfg.out_prefix, "CSV path prefix (one file per mu)");

  auto* brink = app.add_subcommand("brinkman", "convergence study for the Brinkman scheme");
  brink->add_option("--order", bk_cfg.order, "element order r")->check(CLI::Range(2, 3));
  brink->add_option("--levels", bk_cfg.levels, "number of uniform refinements");
  brink->add_option("--nu", bk_cfg.params, "effective viscosity value(s), repeatable");
  brink->add_option("--alpha", bk_cfg.gamma_or_alpha, "zeroth-order coefficient");
  brink->add_option("--tol", bk_cfg.tol, "solver tolerance");
  brink->add_option("--out", bk_cfg.out_prefix, "CSV path prefix (one file per nu)");

  std::vector<int> audit_orders = {2, 3};
  std::string audit_out;
  auto* audit = app.add_subcommand("audit", "exactness and commuting-diagram audit");
  audit->add_option("--order", audit_orders, "element orders to audit");
  audit->add_option("--out", audit_out, "CSV output path");

  int interp_order = 2, interp_levels = 3;
  auto* interp = app.add_subcommand("interp", "interpolation-only convergence rates");
  interp->add_option("--order", interp_order, "element order r")->check(CLI::Range(2, 3));
  interp->add_option("--levels", interp_levels, "number of uniform refinements");

  CLI11_PARSE(app, argc, argv);

  if (quad->parsed()) return run_problem(Problem::quadcurl, qc_cfg, "mu");
  if (brink->parsed()) return run_problem(Problem::brinkman, bk_cfg, "nu");
  if (audit->parsed()) return run_audit(audit_orders, audit_out);
  if (interp->parsed()) return run_interp(interp_order, interp_levels);
  return 0;
}
