// qae command line front end. Subcommands mirror the library layers: solve /
// oracle work on eigenproblems, export-qubo / solve-qubo on raw QUBOs, and
// the rest drive the experiment runners.
//
// Exit codes: 0 success, 2 run completed but some sweep cells failed,
// 1 hard error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qae/config.hpp"
#include "qae/driver.hpp"
#include "qae/experiments.hpp"
#include "qae/qubo.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw qae::QaeError("cannot open output file " + path);
  os << text;
}

int emit(const qae::ExperimentResult& r, const std::string& out) {
  write_text(out, r.csv.to_string());
  if (r.failed_cells > 0) {
    std::cerr << "warning: " << r.failed_cells << " cell(s) failed\n";
    return 2;
  }
  return 0;
}

std::string pick(const std::string& primary, const std::string& fallback,
                 const char* what) {
  if (!primary.empty()) return primary;
  if (!fallback.empty()) return fallback;
  throw qae::QaeError(std::string("missing ") + what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-annealer-style eigensolver"};
  app.require_subcommand(1);

  std::string g_config, g_out;
  std::uint64_t g_seed = 0;
  int g_threads = 1;
  app.add_option("--config", g_config, "job config JSON");
  app.add_option("--seed", g_seed, "base RNG seed");
  app.add_option("--out", g_out, "output path (default stdout)");
  app.add_option("--threads", g_threads,
                 "worker threads for sweeps (0 = hardware)");

  // solve
  auto* solve = app.add_subcommand("solve", "lambda-scan eigensolve");
  std::string s_problem, s_solver, s_out;
  int s_k = 0, s_states = 1;
  double s_noise = 0.0;
  std::uint64_t s_seed = 0;
  bool s_seed_set = false, s_out_set = false;
  solve->add_option("--problem", s_problem, "problem config JSON");
  solve->add_option("--K", s_k, "qubits per coefficient")->required();
  solve->add_option("--states", s_states, "number of states");
  solve->add_option("--solver", s_solver, "tabu|partitioned|sa|exact");
  solve->add_option("--noise-scale", s_noise, "ICE noise scale s");
  solve->add_option("--seed", s_seed, "RNG seed")
      ->each([&](const std::string&) { s_seed_set = true; });
  solve->add_option("--out", s_out, "output CSV path")
      ->each([&](const std::string&) { s_out_set = true; });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "dense reference eigensolve");
  std::string o_problem;
  int o_states = 0;
  oracle->add_option("--problem", o_problem, "problem config JSON");
  oracle->add_option("--states", o_states, "limit printed states (0 = all)");

  // export-qubo
  auto* xq = app.add_subcommand("export-qubo", "write QUBO triplet file");
  std::string x_problem;
  int x_k = 1;
  double x_lambda = 0.0;
  xq->add_option("--problem", x_problem, "problem config JSON");
  xq->add_option("--K", x_k, "qubits per coefficient")->required();
  xq->add_option("--lambda", x_lambda, "energy shift")->required();

  // solve-qubo
  auto* sq = app.add_subcommand("solve-qubo", "solve a QUBO triplet file");
  std::string q_file, q_solver = "tabu";
  sq->add_option("--qubo", q_file, "triplet file")->required();
  sq->add_option("--solver", q_solver, "tabu|partitioned|sa|exact");

  auto* ksw = app.add_subcommand("k-sweep", "error vs K sweep");
  auto* sca = app.add_subcommand("scaling", "solver time scaling sweep");
  auto* con = app.add_subcommand("convergence", "parameter convergence sweep");
  auto* noi = app.add_subcommand("noise", "ICE noise sweep");
  auto* chs = app.add_subcommand("chain-scan", "(lambda, c) chain phase map");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (g_threads == 0) g_threads = int(std::thread::hardware_concurrency());
  if (g_threads < 1) g_threads = 1;

  try {
    if (*solve) {
      const std::string path = pick(s_problem, g_config, "--problem config");
      qae::SolveConfig cfg = qae::parse_solve_config(qae::load_json(path));
      if (!s_solver.empty()) cfg.solver.kind = qae::solver_from_name(s_solver);
      const std::uint64_t seed = s_seed_set ? s_seed : g_seed;

      const qae::SymMatrix h = cfg.problem.build(s_k);
      const qae::EigenDecomposition ed = qae::jacobi_eigen(h);
      qae::NoiseSpec noise;
      noise.scale = s_noise;
      noise.mean_frac = cfg.noise_mean_frac;
      noise.std_frac = cfg.noise_std_frac;
      noise.seed = seed;
      std::vector<qae::QaeResult> results;
      qae::spectrum(h, s_states, s_k, cfg.scans, cfg.solver, cfg.s0,
                    s_noise > 0.0 ? &noise : nullptr, seed, &results);

      qae::CsvTable t;
      t.schema = "qae.solve.v1";
      t.header = {"state_index", "energy_qae", "energy_oracle", "abs_error",
                  "best_lambda", "raw_norm",   "K",             "B",
                  "d",           "solver",     "seed"};
      for (int s = 0; s < s_states; ++s) {
        const qae::QaeResult& r = results[s];
        if (r.overlap_warning)
          std::cerr << "warning: state " << s << " overlaps a deflated state ("
                    << qae::fmt_g17(r.max_prior_overlap) << ")\n";
        t.rows.push_back({std::to_string(s), qae::fmt_g17(r.energy),
                          qae::fmt_g17(ed.eigenvalues[s]),
                          qae::fmt_g17(std::abs(r.energy - ed.eigenvalues[s])),
                          qae::fmt_g17(r.best_lambda), qae::fmt_g17(r.raw_norm),
                          std::to_string(s_k), std::to_string(cfg.problem.b()),
                          std::to_string(cfg.problem.d()),
                          qae::solver_name(cfg.solver.kind),
                          std::to_string(seed)});
      }
      write_text(s_out_set ? s_out : g_out, t.to_string());
      return 0;
    }

    if (*oracle) {
      const std::string path = pick(o_problem, g_config, "--problem config");
      const qae::Json j = qae::load_json(path);
      // Accept either a bare problem object or a full solve config.
      const qae::ProblemConfig pc =
          qae::parse_problem(j.contains("problem") ? j.at("problem") : j);
      const qae::SymMatrix h = pc.build(1);
      const qae::EigenDecomposition ed = qae::jacobi_eigen(h);
      qae::CsvTable t;
      t.schema = "qae.oracle.v1";
      t.header = {"index", "eigenvalue"};
      const int limit = o_states > 0 ? std::min(o_states, h.n()) : h.n();
      for (int i = 0; i < limit; ++i)
        t.rows.push_back({std::to_string(i), qae::fmt_g17(ed.eigenvalues[i])});
      write_text(g_out, t.to_string());
      return 0;
    }

    if (*xq) {
      const std::string path = pick(x_problem, g_config, "--problem config");
      const qae::Json j = qae::load_json(path);
      const qae::ProblemConfig pc =
          qae::parse_problem(j.contains("problem") ? j.at("problem") : j);
      const qae::SymMatrix h = pc.build(x_k);
      const qae::Qubo q =
          qae::build_qubo(h, qae::Encoding(x_k, h.n()), x_lambda);
      std::ostringstream os;
      qae::write_qubo(q, os);
      write_text(g_out, os.str());
      return 0;
    }

    if (*sq) {
      std::ifstream is(q_file);
      if (!is) throw qae::QaeError("cannot open QUBO file " + q_file);
      const qae::Qubo q = qae::read_qubo(is);
      qae::SolverSpec solver;
      solver.kind = qae::solver_from_name(q_solver);
      const qae::SolverResult r = solver.run(q, g_seed);
      std::string bits;
      for (auto b : r.best_bits) bits += b ? '1' : '0';
      write_text(g_out, "energy " + qae::fmt_g17(r.best_energy) + "\nbits " +
                            bits + "\n");
      return 0;
    }

    // Experiment sweeps all read the job config from --config.
    const qae::Json j = qae::load_json(pick(g_config, "", "--config"));
    const std::string out =
        g_out.empty() ? qae::detail::get_or<std::string>(j, "out", "") : g_out;
    if (*ksw)
      return emit(qae::run_k_sweep(qae::parse_k_sweep(j, g_seed), g_threads),
                  out);
    if (*sca)
      return emit(qae::run_scaling(qae::parse_scaling(j, g_seed), g_threads),
                  out);
    if (*con)
      return emit(
          qae::run_convergence(qae::parse_convergence(j, g_seed), g_threads),
          out);
    if (*noi)
      return emit(
          qae::run_noise(qae::parse_noise_sweep(j, g_seed), g_threads), out);
    if (*chs)
      return emit(
          qae::run_chain_scan(qae::parse_chain_scan(j, g_seed), g_threads),
          out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
