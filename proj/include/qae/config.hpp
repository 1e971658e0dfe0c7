// qae/config.hpp -- JSON configuration parsing and matrix file IO. This is
// the only header that touches JSON; the core library stays format-free.
#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qae/common.hpp"
#include "qae/driver.hpp"
#include "qae/experiments.hpp"
#include "qae/hamiltonian.hpp"
#include "qae/hardware.hpp"
#include "qae/linalg.hpp"

namespace qae {

using Json = nlohmann::json;

inline Json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw QaeError("cannot open config file " + path);
  Json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw QaeError("parse error in " + path + ": " + e.what());
  }
  return j;
}

namespace detail {
template <typename T>
T get_or(const Json& j, const std::string& key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}
inline void require(const Json& j, const std::string& key,
                    const std::string& ctx) {
  if (!j.contains(key)) throw QaeError(ctx + ": missing key '" + key + "'");
}
}  // namespace detail

// Matrix files: {"n": <int>, "upper": [row-major upper triangle, n(n+1)/2]}.
inline SymMatrix matrix_from_json(const Json& j) {
  detail::require(j, "n", "matrix");
  detail::require(j, "upper", "matrix");
  const int n = j.at("n").get<int>();
  const auto upper = j.at("upper").get<std::vector<double>>();
  return SymMatrix(n, upper);
}

inline SymMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(load_json(path));
}

inline Json matrix_to_json(const SymMatrix& h) {
  Json j;
  j["n"] = h.n();
  j["upper"] = h.upper();
  return j;
}

// ---------------------------------------------------------------------------

inline BasisSpec parse_basis(const Json& j) {
  BasisSpec b;
  const std::string kind = detail::get_or<std::string>(j, "kind", "cosine");
  if (kind == "cosine")
    b.kind = BasisKind::cosine;
  else if (kind == "fourier")
    b.kind = BasisKind::fourier;
  else
    throw QaeError("basis: unknown kind '" + kind + "'");
  detail::require(j, "m_max", "basis");
  detail::require(j, "domain", "basis");
  b.m_max = j.at("m_max").get<int>();
  const auto dom = j.at("domain").get<std::vector<double>>();
  if (dom.size() != 2) throw QaeError("basis: domain must be [x_min, x_max]");
  b.x_min = dom[0];
  b.x_max = dom[1];
  b.quadrature_points = detail::get_or<int>(j, "quadrature_points", 0);
  return b;
}

// Tabulated potentials accept either inline arrays or a two-column text file
// (whitespace or comma separated; '#' starts a comment).
inline void read_tabulated_file(const std::string& path, std::vector<double>& x,
                                std::vector<double>& v) {
  std::ifstream is(path);
  if (!is) throw QaeError("cannot open potential file " + path);
  std::string line;
  while (std::getline(is, line)) {
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    double xv, vv;
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    xv = std::stod(first);
    if (!(ls >> vv))
      throw QaeError("potential file " + path + ": bad line '" + line + "'");
    x.push_back(xv);
    v.push_back(vv);
  }
  if (x.size() < 2)
    throw QaeError("potential file " + path + ": need at least two points");
}

inline PotentialSpec parse_potential(const Json& j) {
  PotentialSpec p;
  detail::require(j, "kind", "potential");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "harmonic") {
    p.kind = PotentialKind::harmonic;
    detail::require(j, "omega", "harmonic potential");
    p.omega = j.at("omega").get<double>();
  } else if (kind == "morse") {
    p.kind = PotentialKind::morse;
    p.morse_d = detail::get_or<double>(j, "D", defaults::kMorseD);
    p.morse_a = detail::get_or<double>(j, "a", defaults::kMorseA);
    p.r_e = detail::get_or<double>(j, "r_e", defaults::kMorseRe);
  } else if (kind == "tabulated") {
    p.kind = PotentialKind::tabulated;
    if (j.contains("file")) {
      read_tabulated_file(j.at("file").get<std::string>(), p.grid_x, p.grid_v);
    } else {
      detail::require(j, "x", "tabulated potential");
      detail::require(j, "v", "tabulated potential");
      p.grid_x = j.at("x").get<std::vector<double>>();
      p.grid_v = j.at("v").get<std::vector<double>>();
    }
  } else {
    throw QaeError("potential: unknown kind '" + kind + "'");
  }
  return p;
}

inline DimensionSpec parse_dimension(const Json& j) {
  DimensionSpec d;
  detail::require(j, "basis", "dimension");
  detail::require(j, "potential", "dimension");
  d.basis = parse_basis(j.at("basis"));
  d.potential = parse_potential(j.at("potential"));
  d.mass = detail::get_or<double>(j, "mass", 1.0);
  return d;
}

// A problem is either a generated model, a custom dimension list, or a raw
// matrix. Matrix problems report d=1, B=n so downstream CSV columns stay
// meaningful.
struct ProblemConfig {
  bool is_matrix = false;
  SymMatrix matrix{1};
  ProblemSpec spec;

  int d() const { return is_matrix ? 1 : spec.d(); }
  int b() const { return is_matrix ? matrix.n() : spec.b(); }
  SymMatrix build(int k_qubits) const {
    if (!is_matrix) return build_product_hamiltonian(spec, k_qubits);
    if (double(k_qubits) * matrix.n() > double(spec.variable_cap))
      throw QaeError("problem size K*n exceeds variable cap");
    return matrix;
  }
};

inline ProblemConfig parse_problem(const Json& j) {
  ProblemConfig out;
  detail::require(j, "kind", "problem");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "matrix") {
    out.is_matrix = true;
    out.matrix = j.contains("file")
                     ? read_matrix_file(j.at("file").get<std::string>())
                     : matrix_from_json(j);
    out.spec.variable_cap =
        detail::get_or<int>(j, "variable_cap", defaults::kVariableCap);
    return out;
  }
  if (kind == "harmonic") {
    detail::require(j, "d", "harmonic problem");
    detail::require(j, "B", "harmonic problem");
    out.spec = harmonic_problem(
        j.at("d").get<int>(), j.at("B").get<int>(),
        detail::get_or<double>(j, "omega0", 800.0),
        detail::get_or<double>(j, "omega_step", 200.0),
        detail::get_or<double>(j, "halfwidth_sigmas",
                               defaults::kHalfwidthSigmas),
        detail::get_or<double>(j, "mass", 1.0),
        detail::get_or<int>(j, "quad_factor", defaults::kQuadFactor));
  } else if (kind == "morse") {
    out.spec = morse_problem();
    DimensionSpec& dim = out.spec.dims[0];
    if (j.contains("D")) dim.potential.morse_d = j.at("D").get<double>();
    if (j.contains("a")) dim.potential.morse_a = j.at("a").get<double>();
    if (j.contains("r_e")) dim.potential.r_e = j.at("r_e").get<double>();
    if (j.contains("mass")) dim.mass = j.at("mass").get<double>();
    if (j.contains("m_max")) dim.basis.m_max = j.at("m_max").get<int>();
    if (j.contains("domain")) {
      const auto dom = j.at("domain").get<std::vector<double>>();
      if (dom.size() != 2) throw QaeError("morse: domain must be [lo, hi]");
      dim.basis.x_min = dom[0];
      dim.basis.x_max = dom[1];
    }
    if (j.contains("quadrature_points"))
      dim.basis.quadrature_points = j.at("quadrature_points").get<int>();
  } else if (kind == "custom") {
    detail::require(j, "dimensions", "custom problem");
    for (const auto& dj : j.at("dimensions"))
      out.spec.dims.push_back(parse_dimension(dj));
  } else {
    throw QaeError("problem: unknown kind '" + kind + "'");
  }
  out.spec.variable_cap =
      detail::get_or<int>(j, "variable_cap", defaults::kVariableCap);
  return out;
}

inline ScanSpec parse_scan(const Json& j) {
  ScanSpec s;
  detail::require(j, "lambda_min", "scan");
  detail::require(j, "n_lambda", "scan");
  detail::require(j, "d_lambda", "scan");
  s.lambda_min = j.at("lambda_min").get<double>();
  s.n_lambda = j.at("n_lambda").get<int>();
  s.d_lambda = j.at("d_lambda").get<double>();
  if (j.contains("small_k_d_lambda")) {
    // Presence of the key, even as {}, switches off the built-in small-K
    // step widening and uses the literal table.
    std::map<int, double> table;
    for (const auto& [key, val] : j.at("small_k_d_lambda").items())
      table[std::stoi(key)] = val.get<double>();
    s.small_k_d_lambda = std::move(table);
  }
  s.validate();
  return s;
}

inline SolverSpec parse_solver(const Json& j) {
  SolverSpec s;
  const std::string kind =
      detail::get_or<std::string>(j, "kind", "partitioned");
  s.kind = solver_from_name(kind);
  s.tabu.tenure = detail::get_or<int>(j, "tenure", s.tabu.tenure);
  s.tabu.n_rep = detail::get_or<int>(j, "n_rep", s.tabu.n_rep);
  s.tabu.subqubo_size =
      detail::get_or<int>(j, "subqubo_size", s.tabu.subqubo_size);
  s.tabu.exact_threshold =
      detail::get_or<int>(j, "exact_threshold", s.tabu.exact_threshold);
  s.sa.reads = detail::get_or<int>(j, "reads", s.sa.reads);
  s.sa.sweeps = detail::get_or<int>(j, "sweeps", s.sa.sweeps);
  s.sa.t_hot = detail::get_or<double>(j, "t_hot", s.sa.t_hot);
  s.sa.t_cold = detail::get_or<double>(j, "t_cold", s.sa.t_cold);
  s.tabu.validate();
  s.sa.validate();
  return s;
}

inline NoiseSpec parse_noise(const Json& j) {
  NoiseSpec n;
  n.scale = detail::get_or<double>(j, "scale", 0.0);
  n.mean_frac = detail::get_or<double>(j, "mean_frac", n.mean_frac);
  n.std_frac = detail::get_or<double>(j, "std_frac", n.std_frac);
  n.validate();
  return n;
}

inline SaParams parse_sa(const Json& j, std::uint64_t base_seed) {
  SaParams p;
  p.reads = detail::get_or<int>(j, "reads", p.reads);
  p.sweeps = detail::get_or<int>(j, "sweeps", p.sweeps);
  p.t_hot = detail::get_or<double>(j, "t_hot", p.t_hot);
  p.t_cold = detail::get_or<double>(j, "t_cold", p.t_cold);
  p.seed = detail::get_or<std::uint64_t>(j, "seed", base_seed);
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Full job configs, one per CLI subcommand.

// solve: problem + per-state scans + solver defaults.
struct SolveConfig {
  ProblemConfig problem;
  std::vector<ScanSpec> scans;
  SolverSpec solver;
  double s0 = defaults::kS0;
  double noise_mean_frac = 0.007;
  double noise_std_frac = 0.008;
};

inline SolveConfig parse_solve_config(const Json& j) {
  SolveConfig c;
  detail::require(j, "problem", "solve config");
  detail::require(j, "scan", "solve config");
  c.problem = parse_problem(j.at("problem"));
  c.scans.push_back(parse_scan(j.at("scan")));
  if (j.contains("excited_scans"))
    for (const auto& sj : j.at("excited_scans"))
      c.scans.push_back(parse_scan(sj));
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver"));
  c.s0 = detail::get_or<double>(j, "s0", c.s0);
  if (j.contains("noise")) {
    const NoiseSpec n = parse_noise(j.at("noise"));
    c.noise_mean_frac = n.mean_frac;
    c.noise_std_frac = n.std_frac;
  }
  return c;
}

inline std::vector<std::uint64_t> parse_seeds(const Json& j,
                                              std::uint64_t base_seed) {
  if (!j.contains("seeds")) return {base_seed};
  auto seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (seeds.empty()) throw QaeError("config: seeds list is empty");
  return seeds;
}

inline KSweepSpec parse_k_sweep(const Json& j, std::uint64_t base_seed) {
  KSweepSpec s;
  detail::require(j, "problem", "k_sweep config");
  detail::require(j, "scan", "k_sweep config");
  detail::require(j, "k_grid", "k_sweep config");
  const ProblemConfig pc = parse_problem(j.at("problem"));
  if (pc.is_matrix) throw QaeError("k_sweep: matrix problems not supported");
  s.problem = pc.spec;
  s.scans.push_back(parse_scan(j.at("scan")));
  if (j.contains("excited_scans"))
    for (const auto& sj : j.at("excited_scans"))
      s.scans.push_back(parse_scan(sj));
  if (j.contains("solver")) s.solver = parse_solver(j.at("solver"));
  s.k_grid = j.at("k_grid").get<std::vector<int>>();
  s.seeds = parse_seeds(j, base_seed);
  s.states = detail::get_or<int>(j, "states", 1);
  s.s0 = detail::get_or<double>(j, "s0", s.s0);
  return s;
}

inline ScalingSpec parse_scaling(const Json& j, std::uint64_t base_seed) {
  ScalingSpec s;
  detail::require(j, "groups", "scaling config");
  s.b = detail::get_or<int>(j, "B", s.b);
  s.omega0 = detail::get_or<double>(j, "omega0", s.omega0);
  s.omega_step = detail::get_or<double>(j, "omega_step", s.omega_step);
  s.repetitions = detail::get_or<int>(j, "repetitions", s.repetitions);
  if (j.contains("solver")) s.solver = parse_solver(j.at("solver"));
  s.seed = base_seed;
  for (const auto& gj : j.at("groups")) {
    ScalingGroup g;
    detail::require(gj, "d", "scaling group");
    detail::require(gj, "k_grid", "scaling group");
    detail::require(gj, "scan", "scaling group");
    g.d = gj.at("d").get<int>();
    g.k_grid = gj.at("k_grid").get<std::vector<int>>();
    g.scan = parse_scan(gj.at("scan"));
    s.groups.push_back(g);
  }
  return s;
}

inline ConvergenceSpec parse_convergence(const Json& j,
                                         std::uint64_t base_seed) {
  ConvergenceSpec s;
  detail::require(j, "problem", "convergence config");
  detail::require(j, "scan", "convergence config");
  detail::require(j, "sweep", "convergence config");
  detail::require(j, "grid", "convergence config");
  const ProblemConfig pc = parse_problem(j.at("problem"));
  if (pc.is_matrix)
    throw QaeError("convergence: matrix problems not supported");
  s.problem = pc.spec;
  s.scan = parse_scan(j.at("scan"));
  if (j.contains("solver")) s.solver = parse_solver(j.at("solver"));
  s.seeds = parse_seeds(j, base_seed);
  s.sweep = j.at("sweep").get<std::string>();
  s.grid = j.at("grid").get<std::vector<double>>();
  s.lambda_range = detail::get_or<double>(j, "lambda_range", 0.0);
  s.k = detail::get_or<int>(j, "K", s.k);
  if (s.sweep == "n_lambda" && s.lambda_range <= 0.0)
    throw QaeError("convergence: n_lambda sweep needs lambda_range > 0");
  return s;
}

inline NoiseSweepSpec parse_noise_sweep(const Json& j,
                                        std::uint64_t base_seed) {
  NoiseSweepSpec s;
  detail::require(j, "problem", "noise config");
  detail::require(j, "scan", "noise config");
  detail::require(j, "k_grid", "noise config");
  const ProblemConfig pc = parse_problem(j.at("problem"));
  if (pc.is_matrix) throw QaeError("noise: matrix problems not supported");
  s.problem = pc.spec;
  s.scan = parse_scan(j.at("scan"));
  if (j.contains("solver")) s.solver = parse_solver(j.at("solver"));
  s.seeds = parse_seeds(j, base_seed);
  s.k_grid = j.at("k_grid").get<std::vector<int>>();
  if (j.contains("scales"))
    s.scales = j.at("scales").get<std::vector<double>>();
  if (j.contains("noise")) {
    const NoiseSpec n = parse_noise(j.at("noise"));
    s.mean_frac = n.mean_frac;
    s.std_frac = n.std_frac;
  }
  return s;
}

inline ChainScanSpec parse_chain_scan(const Json& j, std::uint64_t base_seed) {
  ChainScanSpec s;
  detail::require(j, "problem", "chain_scan config");
  const ProblemConfig pc = parse_problem(j.at("problem"));
  if (pc.is_matrix) {
    throw QaeError("chain_scan: matrix problems not supported");
  }
  s.problem = pc.spec;
  s.k = detail::get_or<int>(j, "K", s.k);
  s.chain.chain_length = detail::get_or<int>(j, "chain_length", 3);
  const std::string tie = detail::get_or<std::string>(j, "tie_rule", "zero");
  if (tie == "zero")
    s.chain.tie_rule = TieRule::zero;
  else if (tie == "one")
    s.chain.tie_rule = TieRule::one;
  else
    throw QaeError("chain_scan: tie_rule must be 'zero' or 'one'");
  s.chain.validate();
  s.sa = j.contains("sa") ? parse_sa(j.at("sa"), base_seed)
                          : SaParams{.seed = base_seed};
  if (j.contains("lambda_grid")) {
    const Json& lg = j.at("lambda_grid");
    if (lg.is_array()) {
      s.lambda_grid = lg.get<std::vector<double>>();
    } else {
      s.lambda_n = detail::get_or<int>(lg, "n", s.lambda_n);
      s.e0_factor = detail::get_or<double>(lg, "e0_factor", s.e0_factor);
    }
  }
  if (j.contains("c_grid")) {
    const Json& cg = j.at("c_grid");
    if (cg.is_array()) {
      s.c_grid = cg.get<std::vector<double>>();
    } else {
      s.c_n = detail::get_or<int>(cg, "n", s.c_n);
      s.c_max_factor = detail::get_or<double>(cg, "max_factor", s.c_max_factor);
    }
  }
  return s;
}

}  // namespace qae
