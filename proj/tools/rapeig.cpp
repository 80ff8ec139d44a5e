// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: benchmark grid, single solves on Matrix Market files,
// preconditioner diagnostics, and mesh/pencil export.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "rap/rap.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw rap::UsageError("cannot open output file '" + path + "'");
  return file;
}

struct SolveOptions {
  std::string a_path, m_path, x0_path;
  std::string solver = "rap";
  std::string pc_kind = "none";
  double H = 0.25, h = 0.0;
  double overlap = 0.5;
  double tol = 1e-10;
  int max_iter = 20000;
  double mu = 0.0, ell = 0.0;
  std::string out;
};

int run_solve(const SolveOptions& o) {
  using namespace rap;
  const SpdMatrix a = read_matrix_market(o.a_path);
  const SpdMatrix m = read_matrix_market(o.m_path);
  const MatrixPencil p{a, m};

  PreconditionerHandle pc;
  std::shared_ptr<SchwarzDecomposition> dec;
  std::optional<MeshHierarchy> hier;
  if (o.pc_kind == "none") {
    pc = identity_preconditioner(p.dim());
  } else if (o.pc_kind == "jacobi") {
    pc = jacobi_preconditioner(p.a);
  } else if (o.pc_kind == "schwarz2") {
    if (!(o.h > 0.0))
      throw UsageError("--pc schwarz2 needs --h (and optionally --H) describing the mesh");
    hier = build_mesh_hierarchy(o.H, o.h);
    if (hier->fine.interior != p.dim())
      throw UsageError("--pc schwarz2: mesh size does not match the matrix dimension");
    dec = std::make_shared<SchwarzDecomposition>(
        build_two_level_overlapping(*hier, o.overlap, p.a));
    pc = schwarz_preconditioner(dec);
  } else {
    throw UsageError("unknown preconditioner '" + o.pc_kind + "' (none|jacobi|schwarz2)");
  }

  DenseVector x0hat;
  if (!o.x0_path.empty()) {
    x0hat = read_vector(o.x0_path);
    if (x0hat.size() != p.dim()) throw UsageError("--x0: dimension mismatch");
  } else {
    x0hat = DenseVector::Ones(p.dim());
  }

  SolverConfig cfg;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.record_residuals = true;

  SolveResult res{};
  if (o.solver == "rap") {
    AccelCoefficients coeffs{};
    if (o.mu > 0.0 && o.ell > 0.0) {
      coeffs = compute_coefficients(o.mu, o.ell);
    } else {
      PairedVector x0{pc.apply(x0hat), x0hat};
      const auto est = estimate_mu_ell(p, pc, x0);
      std::cerr << "# auto (mu, L) = (" << est.mu << ", " << est.ell << ")\n";
      coeffs = compute_coefficients(est.mu, est.ell);
    }
    res = rap_solve(p, pc, coeffs, x0hat, cfg);
  } else if (o.solver == "psd") {
    res = psd_solve(p, pc, x0hat, cfg);
  } else if (o.solver == "ra") {
    std::optional<AccelCoefficients> coeffs;
    if (o.mu > 0.0 && o.ell > 0.0) coeffs = compute_coefficients(o.mu, o.ell);
    res = ra_solve(p, x0hat, cfg, coeffs);
  } else if (o.solver == "sd") {
    res = sd_solve(p, x0hat, cfg);
  } else {
    throw UsageError("unknown solver '" + o.solver + "' (rap|psd|ra|sd)");
  }

  std::cout << "lambda = " << std::setprecision(15) << res.lambda << "\n"
            << "iterations = " << res.history.iterations << "\n"
            << "converged = " << (res.history.converged ? "yes" : "no") << "\n";
  if (!o.out.empty()) {
    std::ofstream f;
    res.history.write_csv(open_out(o.out, f));
  }
  return res.history.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian acceleration with preconditioning for SPD eigenpencils"};
  app.require_subcommand(1);
  // the mesh-size flag is --h, so help keeps only its long form
  app.set_help_flag("--help", "print usage");

  // bench
  auto* bench = app.add_subcommand("bench", "reproduce the solver comparison grid");
  bench->set_help_flag("--help", "print usage");
  rap::BenchSpec spec;
  std::string solvers_arg = "rap,psd,ra,sd";
  std::string h_arg;
  std::string format = "table";
  bool full_scale = false;
  bench->add_option("--H", spec.coarse_h, "coarse mesh size (reciprocal power of two)");
  bench->add_option("--h", h_arg, "comma list of fine mesh sizes (default 2^-3..2^-7)");
  bench->add_option("--overlap", spec.overlap, "subdomain overlap ratio in [0,1]");
  bench->add_option("--tol", spec.tol, "relative eigenvalue tolerance");
  bench->add_option("--max-iter", spec.max_iter, "iteration cap");
  bench->add_option("--solver", solvers_arg, "comma list from rap,psd,ra,sd");
  bench->add_option("--seed", spec.seed, "seed recorded with the run");
  bench->add_option("--mu", spec.mu_override, "override the convexity constant");
  bench->add_option("--L", spec.ell_override, "override the smoothness constant");
  bench->add_option("--out", spec.output_path, "output file ('-' for stdout)");
  bench->add_option("--format", format, "table|csv")
      ->check(CLI::IsMember({"table", "csv"}));
  bench->add_flag("--full-scale", full_scale,
                  "extend the default grid to 2^-8..2^-10 (slow)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one pencil from Matrix Market files");
  SolveOptions so;
  solve->add_option("--A", so.a_path, "stiffness matrix (.mtx)")->required();
  solve->add_option("--M", so.m_path, "mass matrix (.mtx)")->required();
  solve->add_option("--x0", so.x0_path, "initial vector file (one value per line)");
  solve->add_option("--solver", so.solver, "rap|psd|ra|sd");
  solve->add_option("--pc", so.pc_kind, "none|jacobi|schwarz2");
  solve->add_option("--H", so.H, "coarse mesh size for schwarz2");
  solve->add_option("--h", so.h, "fine mesh size for schwarz2");
  solve->add_option("--overlap", so.overlap, "overlap ratio for schwarz2");
  solve->add_option("--tol", so.tol, "relative tolerance");
  solve->add_option("--max-iter", so.max_iter, "iteration cap");
  solve->add_option("--mu", so.mu, "convexity constant override");
  solve->add_option("--L", so.ell, "smoothness constant override");
  solve->add_option("--out", so.out, "write convergence history CSV here");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "preconditioner quality report for a small mesh");
  double dg_h = 0.125, dg_H = 0.25, dg_overlap = 0.5, dg_rho_frac = 0.25;
  int dg_samples = 1024;
  unsigned dg_seed = 42;
  std::string dg_out, dg_format = "csv";
  diag->add_option("--h", dg_h, "fine mesh size");
  diag->add_option("--H", dg_H, "coarse mesh size");
  diag->add_option("--overlap", dg_overlap, "overlap ratio");
  diag->add_option("--rho-star-frac", dg_rho_frac,
                   "rho* = lambda1 + frac*(lambda2-lambda1), frac in [0, 0.5)");
  diag->add_option("--samples", dg_samples, "sublevel-set sample budget");
  diag->add_option("--seed", dg_seed, "sampling seed");
  diag->add_option("--out", dg_out, "output file ('-' for stdout)");
  diag->add_option("--format", dg_format, "csv|jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  // mesh
  auto* mesh = app.add_subcommand("mesh", "export an assembled pencil in Matrix Market format");
  double mx_h = 0.125;
  std::string mx_out = "pencil";
  mesh->add_option("--h", mx_h, "mesh size");
  mesh->add_option("--out", mx_out, "output path prefix (writes <prefix>_a.mtx, <prefix>_m.mtx)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) {
      if (!h_arg.empty()) {
        spec.fine_h.clear();
        for (const auto& tok : split_list(h_arg)) spec.fine_h.push_back(std::stod(tok));
      } else if (full_scale) {
        for (int k = 8; k <= 10; ++k) spec.fine_h.push_back(std::ldexp(1.0, -k));
      }
      spec.solvers = split_list(solvers_arg);
      const auto results = rap::run_benchmark(spec);
      std::ofstream f;
      std::ostream& out = open_out(spec.output_path, f);
      if (format == "csv")
        rap::write_bench_csv(out, results);
      else
        rap::write_bench_table(out, results);
      for (const auto& c : results.cells)
        if (c.failed) std::cerr << "cell " << c.solver << " h=" << c.h << " failed: " << c.note << "\n";
      return 0;
    }
    if (*solve) return run_solve(so);
    if (*diag) {
      using namespace rap;
      const auto pencil = assemble_laplacian_p1(make_structured_mesh(dg_h));
      const auto hier = build_mesh_hierarchy(dg_H, dg_h);
      auto dec = std::make_shared<SchwarzDecomposition>(
          build_two_level_overlapping(hier, dg_overlap, pencil.a));
      const auto pc = schwarz_preconditioner(dec);
      const SpdMatrix b = assembled_preconditioner_matrix(pc);
      const auto eig = dense_generalized_eig(pencil);
      const double rho_star = eig.values[0] + dg_rho_frac * (eig.values[1] - eig.values[0]);
      SamplingPlan plan;
      plan.directions = std::max(1, dg_samples / plan.radii);
      plan.seed = dg_seed;
      const auto q = precond_quality(pencil.a, pencil.m, b, rho_star, plan);
      std::ofstream f;
      std::ostream& out = open_out(dg_out, f);
      if (dg_format == "jsonl")
        write_quality_jsonl(out, q);
      else
        write_quality_csv(out, q);
      return 0;
    }
    if (*mesh) {
      using namespace rap;
      const auto pencil = assemble_laplacian_p1(make_structured_mesh(mx_h));
      write_matrix_market(mx_out + "_a.mtx", pencil.a);
      write_matrix_market(mx_out + "_m.mtx", pencil.m);
      std::cout << "wrote " << mx_out << "_a.mtx and " << mx_out << "_m.mtx (n = "
                << pencil.dim() << ")\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
