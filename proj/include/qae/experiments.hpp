// qae/experiments.hpp -- experiment harness: parameter sweeps emitted as
// deterministic CSV tables (convergence, scaling, noise, chain scan).
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "qae/common.hpp"
#include "qae/driver.hpp"
#include "qae/hamiltonian.hpp"
#include "qae/hardware.hpp"

namespace qae {

// Rows are plain strings; doubles go through fmt_g17 so reruns with the same
// seeds are byte-identical. Columns whose name starts with "time" carry wall
// clock and are exempt from that guarantee (normalized() blanks them).
struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string(bool strip_timing = false) const {
    std::vector<bool> timing(header.size(), false);
    for (std::size_t c = 0; c < header.size(); ++c)
      timing[c] = header[c].rfind("time", 0) == 0 ||
                  header[c].rfind("log10_time", 0) == 0;
    std::string out = "# schema: " + schema + "\n";
    for (std::size_t c = 0; c < header.size(); ++c)
      out += header[c] + (c + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t c = 0; c < row.size(); ++c)
        out += (strip_timing && timing[c] ? std::string("-") : row[c]) +
               (c + 1 < row.size() ? "," : "\n");
    return out;
  }
  std::string normalized() const { return to_string(true); }

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw QaeError("cannot open output file " + path);
    os << to_string();
  }
};

// Deterministic worker pool: results land by index, so scheduling order never
// shows in the output.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int nt = std::min(threads, n);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

struct ExperimentResult {
  CsvTable csv;
  int failed_cells = 0;
};

// ---------------------------------------------------------------------------
// k-sweep: error vs qubits-per-coefficient, optionally with excited states.

struct KSweepSpec {
  ProblemSpec problem;
  std::vector<ScanSpec> scans;  // scans[i] drives state i, last repeats
  SolverSpec solver;
  std::vector<int> k_grid;
  std::vector<std::uint64_t> seeds;
  int states = 1;
  double s0 = defaults::kS0;
};

inline ExperimentResult run_k_sweep(const KSweepSpec& spec, int threads = 1) {
  const int d = spec.problem.d();
  const int b = spec.problem.b();
  const int kmax = *std::max_element(spec.k_grid.begin(), spec.k_grid.end());
  const SymMatrix h = build_product_hamiltonian(spec.problem, kmax);
  const EigenDecomposition oracle = jacobi_eigen(h);

  struct Cell {
    int k;
    std::uint64_t seed;
    std::vector<QaeResult> results;
    std::string status = "ok";
  };
  std::vector<Cell> cells;
  for (int k : spec.k_grid)
    for (std::uint64_t seed : spec.seeds) cells.push_back({k, seed, {}, "ok"});

  parallel_for(int(cells.size()), threads, [&](int i) {
    Cell& cell = cells[i];
    try {
      spectrum(h, spec.states, cell.k, spec.scans, spec.solver, spec.s0,
               nullptr, cell.seed, &cell.results);
    } catch (const QaeError& e) {
      cell.status = std::string(e.what()).rfind("all trivial", 0) == 0
                        ? "trivial"
                        : "error";
    }
  });

  ExperimentResult out;
  out.csv.schema = "qae.k_sweep.v1";
  out.csv.header = {"d",          "B",           "K",
                    "state_index", "seed",        "energy_qae",
                    "energy_oracle", "abs_error", "best_lambda",
                    "raw_norm",   "status"};
  for (const auto& cell : cells) {
    if (cell.status != "ok") ++out.failed_cells;
    const int nstates = cell.status == "ok" ? spec.states : 1;
    for (int s = 0; s < nstates; ++s) {
      const bool ok = cell.status == "ok";
      const double eq = ok ? cell.results[s].energy : 0.0;
      const double eo = oracle.eigenvalues[s];
      out.csv.rows.push_back(
          {std::to_string(d), std::to_string(b), std::to_string(cell.k),
           std::to_string(s), std::to_string(cell.seed), fmt_g17(eq),
           fmt_g17(eo), fmt_g17(ok ? std::abs(eq - eo) : 0.0),
           fmt_g17(ok ? cell.results[s].best_lambda : 0.0),
           fmt_g17(ok ? cell.results[s].raw_norm : 0.0), cell.status});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// scaling: solver wall time across K and d (median of `repetitions` runs of
// the scan's solver loop; Hamiltonian construction excluded).

struct ScalingGroup {
  int d = 1;
  std::vector<int> k_grid;
  ScanSpec scan;
};

struct ScalingSpec {
  int b = 3;
  double omega0 = 800.0;
  double omega_step = 200.0;
  int repetitions = 3;
  SolverSpec solver;
  std::vector<ScalingGroup> groups;
  std::uint64_t seed = 0;
};

inline ExperimentResult run_scaling(const ScalingSpec& spec, int threads = 1) {
  struct Cell {
    int d, k, n_vars;
    double time_s = 0.0;
    std::string status = "ok";
  };
  std::vector<Cell> cells;
  std::vector<const ScanSpec*> cell_scan;
  for (const auto& g : spec.groups)
    for (int k : g.k_grid) {
      int bd = 1;
      for (int t = 0; t < g.d; ++t) bd *= spec.b;
      cells.push_back({g.d, k, k * bd, 0.0, "ok"});
      cell_scan.push_back(&g.scan);
    }

  // Hamiltonians per distinct d, built once up front.
  std::vector<SymMatrix> hd;
  int dmax = 0;
  for (const auto& g : spec.groups) dmax = std::max(dmax, g.d);
  for (int d = 0; d <= dmax; ++d) {
    if (d == 0) {
      hd.emplace_back(1);
      continue;
    }
    ProblemSpec p = harmonic_problem(d, spec.b, spec.omega0, spec.omega_step);
    p.variable_cap = 1 << 20;
    hd.push_back(build_product_hamiltonian(p));
  }

  parallel_for(int(cells.size()), threads, [&](int i) {
    Cell& cell = cells[i];
    std::vector<double> times;
    try {
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        const QaeResult r =
            ground_state(hd[cell.d], cell.k, *cell_scan[i], spec.solver,
                         nullptr, hash_seed(spec.seed, i, rep));
        times.push_back(r.solver_seconds);
      }
      std::sort(times.begin(), times.end());
      cell.time_s = times[times.size() / 2];
    } catch (const QaeError& e) {
      cell.status = std::string(e.what()).rfind("all trivial", 0) == 0
                        ? "trivial"
                        : "error";
    }
  });

  ExperimentResult out;
  out.csv.schema = "qae.scaling.v1";
  out.csv.header = {"d",      "B",        "K",
                    "n_vars", "solver",   "time_s",
                    "time_per_k", "log10_time_per_k", "status"};
  for (const auto& cell : cells) {
    if (cell.status != "ok") ++out.failed_cells;
    const double tpk = cell.time_s / cell.k;
    out.csv.rows.push_back(
        {std::to_string(cell.d), std::to_string(spec.b),
         std::to_string(cell.k), std::to_string(cell.n_vars),
         solver_name(spec.solver.kind), fmt_g17(cell.time_s), fmt_g17(tpk),
         fmt_g17(tpk > 0.0 ? std::log10(tpk) : 0.0), cell.status});
  }
  return out;
}

// ---------------------------------------------------------------------------
// convergence: error vs one swept solver/driver parameter.

struct ConvergenceSpec {
  ProblemSpec problem;
  ScanSpec scan;
  SolverSpec solver;
  std::vector<std::uint64_t> seeds;
  std::string sweep;  // "n_rep" | "reads" | "n_lambda"
  std::vector<double> grid;
  double lambda_range = 0.0;  // n_lambda sweep: d_lambda = range / n_lambda
  int k = 8;
};

inline ExperimentResult run_convergence(const ConvergenceSpec& spec,
                                        int threads = 1) {
  if (spec.sweep != "n_rep" && spec.sweep != "reads" &&
      spec.sweep != "n_lambda")
    throw QaeError("run_convergence: unknown sweep '" + spec.sweep + "'");
  const SymMatrix h = build_product_hamiltonian(spec.problem, spec.k);
  const EigenDecomposition oracle = jacobi_eigen(h);
  const double e0 = oracle.eigenvalues[0];

  struct Cell {
    double value;
    std::uint64_t seed;
    double energy = 0.0;
    std::string status = "ok";
  };
  std::vector<Cell> cells;
  for (double v : spec.grid)
    for (std::uint64_t seed : spec.seeds) cells.push_back({v, seed, 0.0, "ok"});

  parallel_for(int(cells.size()), threads, [&](int i) {
    Cell& cell = cells[i];
    SolverSpec solver = spec.solver;
    ScanSpec scan = spec.scan;
    if (spec.sweep == "n_rep") {
      solver.tabu.n_rep = std::max(1, int(cell.value));
    } else if (spec.sweep == "reads") {
      solver.sa.reads = std::max(1, int(cell.value));
    } else if (spec.sweep == "n_lambda") {
      scan.n_lambda = std::max(1, int(cell.value));
      scan.d_lambda = spec.lambda_range / scan.n_lambda;
    } else {
      throw QaeError("run_convergence: unknown sweep '" + spec.sweep + "'");
    }
    try {
      cell.energy =
          ground_state(h, spec.k, scan, solver, nullptr, cell.seed).energy;
    } catch (const QaeError& e) {
      cell.status = std::string(e.what()).rfind("all trivial", 0) == 0
                        ? "trivial"
                        : "error";
    }
  });

  ExperimentResult out;
  out.csv.schema = "qae.convergence.v1";
  out.csv.header = {"sweep",      "value", "d",
                    "B",          "K",     "seed",
                    "energy_qae", "energy_oracle", "abs_error", "status"};
  for (const auto& cell : cells) {
    if (cell.status != "ok") ++out.failed_cells;
    out.csv.rows.push_back(
        {spec.sweep, fmt_g17(cell.value), std::to_string(spec.problem.d()),
         std::to_string(spec.problem.b()), std::to_string(spec.k),
         std::to_string(cell.seed), fmt_g17(cell.energy), fmt_g17(e0),
         fmt_g17(cell.status == "ok" ? std::abs(cell.energy - e0) : 0.0),
         cell.status});
  }
  return out;
}

// ---------------------------------------------------------------------------
// noise: k-sweep crossed with ICE noise scales.

struct NoiseSweepSpec {
  ProblemSpec problem;
  ScanSpec scan;
  SolverSpec solver;
  std::vector<std::uint64_t> seeds;
  std::vector<int> k_grid;
  std::vector<double> scales{0.0, 1.0, 3.0, 5.0};
  double mean_frac = 0.007;
  double std_frac = 0.008;
};

inline ExperimentResult run_noise(const NoiseSweepSpec& spec,
                                  int threads = 1) {
  const int kmax = *std::max_element(spec.k_grid.begin(), spec.k_grid.end());
  const SymMatrix h = build_product_hamiltonian(spec.problem, kmax);
  const double e0 = jacobi_eigen(h).eigenvalues[0];

  struct Cell {
    double scale;
    int k;
    std::uint64_t seed;
    QaeResult result;
    std::string status = "ok";
  };
  std::vector<Cell> cells;
  for (double s : spec.scales)
    for (int k : spec.k_grid)
      for (std::uint64_t seed : spec.seeds)
        cells.push_back({s, k, seed, {}, "ok"});

  parallel_for(int(cells.size()), threads, [&](int i) {
    Cell& cell = cells[i];
    NoiseSpec noise;
    noise.scale = cell.scale;
    noise.mean_frac = spec.mean_frac;
    noise.std_frac = spec.std_frac;
    noise.seed = cell.seed;
    try {
      cell.result = ground_state(h, cell.k, spec.scan, spec.solver,
                                 cell.scale > 0.0 ? &noise : nullptr,
                                 cell.seed);
    } catch (const QaeError& e) {
      cell.status = std::string(e.what()).rfind("all trivial", 0) == 0
                        ? "trivial"
                        : "error";
    }
  });

  ExperimentResult out;
  out.csv.schema = "qae.noise.v1";
  out.csv.header = {"scale", "K",          "d",
                    "B",     "seed",       "energy_qae",
                    "energy_oracle", "abs_error", "best_lambda", "status"};
  for (const auto& cell : cells) {
    if (cell.status != "ok") ++out.failed_cells;
    const bool ok = cell.status == "ok";
    out.csv.rows.push_back(
        {fmt_g17(cell.scale), std::to_string(cell.k),
         std::to_string(spec.problem.d()), std::to_string(spec.problem.b()),
         std::to_string(cell.seed), fmt_g17(ok ? cell.result.energy : 0.0),
         fmt_g17(e0), fmt_g17(ok ? std::abs(cell.result.energy - e0) : 0.0),
         fmt_g17(ok ? cell.result.best_lambda : 0.0), cell.status});
  }
  return out;
}

// ---------------------------------------------------------------------------
// chain scan: the (lambda, c) phase map.

struct ChainScanSpec {
  ProblemSpec problem;
  int k = 2;
  ChainSpec chain;           // chain_length + tie_rule; penalty comes from c_grid
  SaParams sa;
  std::vector<double> lambda_grid;  // empty -> auto from lambda_n/e0_factor
  std::vector<double> c_grid;       // empty -> auto from c_n/c_max_factor
  int lambda_n = 9;
  double e0_factor = 2.0;
  int c_n = 8;
  double c_max_factor = 20.0;
};

inline ExperimentResult run_chain_scan(const ChainScanSpec& spec,
                                       int /*threads*/ = 1) {
  const SymMatrix h = build_product_hamiltonian(spec.problem, spec.k);
  const Encoding enc(spec.k, h.n());

  std::vector<double> lambdas = spec.lambda_grid;
  if (lambdas.empty()) {
    const double e0 = jacobi_eigen(h).eigenvalues[0];
    const double top = spec.e0_factor * e0;
    for (int i = 0; i < spec.lambda_n; ++i)
      lambdas.push_back(spec.lambda_n > 1 ? top * i / (spec.lambda_n - 1)
                                          : top);
  }
  std::vector<double> cs = spec.c_grid;
  if (cs.empty()) {
    double m = 0.0;
    for (double lam : lambdas) m = std::max(m, build_qubo(h, enc, lam).max_abs());
    const double top = spec.c_max_factor * m;
    for (int i = 0; i < spec.c_n; ++i)
      cs.push_back(spec.c_n > 1 ? top * i / (spec.c_n - 1) : top);
  }

  const std::vector<ChainCell> cells =
      scan_lambda_chain(h, enc, lambdas, cs, spec.chain, spec.sa);

  ExperimentResult out;
  out.csv.schema = "qae.chain_scan.v1";
  out.csv.header = {"lambda", "c", "min_energy", "break_rate", "trivial_flag"};
  for (const auto& cell : cells)
    out.csv.rows.push_back({fmt_g17(cell.lambda), fmt_g17(cell.c),
                            fmt_g17(cell.min_energy), fmt_g17(cell.break_rate),
                            cell.trivial ? "1" : "0"});
  return out;
}

}  // namespace qae
