// qae/hardware.hpp -- emulated annealer imperfections: integrated-control
// -error noise on Q and qubit chains with a chain penalty, plus the
// two-dimensional (lambda, c) scan that maps the resulting phase structure.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qae/common.hpp"
#include "qae/qubo.hpp"
#include "qae/solvers.hpp"

namespace qae {

struct NoiseSpec {
  double scale = 0.0;      // 0 disables
  double mean_frac = 0.007;
  double std_frac = 0.008;
  std::uint64_t seed = 0;

  void validate() const {
    if (scale < 0.0) throw QaeError("NoiseSpec: scale must be >= 0");
    if (mean_frac < 0.0 || mean_frac > 0.2 || std_frac < 0.0 ||
        std_frac > 0.2)
      throw QaeError("NoiseSpec: fractions must lie in [0, 0.2]");
  }
};

// Perturb every stored element by delta = s*M*(u*mean_frac + g*std_frac)
// with M = max|Q|, u a random sign and g standard normal. Each call draws a
// fresh stream from spec.seed (one programming of the device).
inline Qubo apply_noise(const Qubo& q, const NoiseSpec& spec) {
  spec.validate();
  if (spec.scale == 0.0) return q;
  const double m = q.max_abs();
  Qubo out = q;
  Rng rng(hash_seed(0x1ce5eedULL, spec.seed));
  for (double& v : out.raw()) {
    const double u = rng.sign();
    const double g = rng.normal();
    v += spec.scale * m * (u * spec.mean_frac + g * spec.std_frac);
  }
  return out;
}

enum class TieRule { zero, one };

struct ChainSpec {
  int chain_length = 1;      // L physical qubits per logical variable
  double chain_penalty = 0.0;  // c, cm^-1
  TieRule tie_rule = TieRule::zero;

  void validate() const {
    if (chain_length < 1) throw QaeError("ChainSpec: chain_length must be >= 1");
    if (chain_penalty < 0.0)
      throw QaeError("ChainSpec: chain_penalty must be >= 0");
  }
};

// Logical variable i becomes the linear chain of physical qubits
// [i*L, (i+1)*L). Linear terms split evenly (Q_ii/L per member); the logical
// coupling Q_ij lands once between member (j mod L) of chain i and member
// (i mod L) of chain j, spreading couplings along the chains; every adjacent
// pair inside a chain gets the penalty c*(x_a + x_b - 2 x_a x_b), which is 0
// when the pair agrees and c when it breaks.
inline Qubo embed_chains(const Qubo& q, const ChainSpec& spec) {
  spec.validate();
  const int l = spec.chain_length;
  if (l == 1) return q;
  const int n = q.n();
  Qubo out(n * l);
  for (int i = 0; i < n; ++i) {
    const double lin = q.at(i, i) / l;
    for (int m = 0; m < l; ++m) out.add(i * l + m, i * l + m, lin);
    for (int j = i + 1; j < n; ++j) {
      const double v = q.at(i, j);
      if (v != 0.0) out.add(i * l + (j % l), j * l + (i % l), v);
    }
    const double c = spec.chain_penalty;
    if (c != 0.0) {
      for (int m = 0; m + 1 < l; ++m) {
        out.add(i * l + m, i * l + m, c);
        out.add(i * l + m + 1, i * l + m + 1, c);
        out.add(i * l + m, i * l + m + 1, -2.0 * c);
      }
    }
  }
  return out;
}

// Majority vote per chain; even splits follow tie_rule. A chain counts as
// broken when its members disagree. Returns (logical bits, break rate).
inline std::pair<BitString, double> unembed(const BitString& phys,
                                            const ChainSpec& spec) {
  spec.validate();
  const int l = spec.chain_length;
  if (phys.size() % l != 0)
    throw QaeError("unembed: length not divisible by chain_length");
  const int n = int(phys.size()) / l;
  BitString logical(n, 0);
  int broken = 0;
  for (int i = 0; i < n; ++i) {
    int ones = 0;
    for (int m = 0; m < l; ++m) ones += phys[i * l + m];
    if (ones > 0 && ones < l) ++broken;
    if (2 * ones > l)
      logical[i] = 1;
    else if (2 * ones == l)
      logical[i] = (spec.tie_rule == TieRule::one) ? 1 : 0;
  }
  return {logical, n > 0 ? double(broken) / n : 0.0};
}

struct ChainCell {
  double lambda = 0.0;
  double c = 0.0;
  double min_energy = 0.0;  // 0 when trivial
  double break_rate = 0.0;
  bool trivial = true;
};

// Fig-5-style phase map: for every (lambda, c) build the QAE QUBO, embed it,
// anneal, majority-vote back and report the renormalized energy
// F_phys/||a||^2 + lambda. For unanimous chains that expression IS the
// Rayleigh quotient of the decoded state; broken chains at small c drive it
// below the true ground energy, which is the unphysical region the scan is
// meant to expose. Majority votes that collapse to the zero vector mark the
// cell trivial. Per-cell seeds depend only on the grid position.
inline std::vector<ChainCell> scan_lambda_chain(
    const SymMatrix& h, const Encoding& enc,
    const std::vector<double>& lambda_grid, const std::vector<double>& c_grid,
    const ChainSpec& chain, const SaParams& sa) {
  if (lambda_grid.empty() || c_grid.empty())
    throw QaeError("scan_lambda_chain: empty grid");
  std::vector<ChainCell> cells;
  cells.reserve(lambda_grid.size() * c_grid.size());
  for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
    const Qubo q = build_qubo(h, enc, lambda_grid[li]);
    for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
      ChainSpec cs = chain;
      cs.chain_penalty = c_grid[ci];
      const Qubo qp = embed_chains(q, cs);
      SaParams params = sa;
      params.seed = hash_seed(sa.seed, li, ci);
      const SolverResult r = sa_solve(qp, params);
      auto [logical, brate] = unembed(r.best_bits, cs);
      ChainCell cell;
      cell.lambda = lambda_grid[li];
      cell.c = c_grid[ci];
      cell.break_rate = brate;
      const Vector a = decode(logical, enc);
      const double nrm = norm(a);
      if (nrm < 1e-6) {
        cell.trivial = true;
        cell.min_energy = 0.0;
      } else {
        cell.trivial = false;
        cell.min_energy = r.best_energy / (nrm * nrm) + lambda_grid[li];
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace qae
