// qae/solvers.hpp -- QUBO minimizers: exact Gray-code enumeration (ground
// truth), Tabu search with incremental flip gains, backbone-style sub-QUBO
// partitioning, and multi-read simulated annealing.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "qae/common.hpp"
#include "qae/qubo.hpp"

namespace qae {

struct TabuParams {
  int tenure = 20;
  int n_rep = 10000;        // consecutive non-improving steps before stopping
  int subqubo_size = 47;    // partitioning threshold / active-set size
  int exact_threshold = 20; // sub-problems up to this size solved exactly
  std::uint64_t seed = 0;

  void validate() const {
    if (tenure < 1 || n_rep < 1) throw QaeError("TabuParams: bad tenure/n_rep");
    if (exact_threshold > 30)
      throw QaeError("TabuParams: exact_threshold must be <= 30");
    if (subqubo_size < std::max(1, exact_threshold))
      throw QaeError("TabuParams: subqubo_size must be >= exact_threshold");
  }
};

struct SaParams {
  int reads = 10000;
  int sweeps = 100;
  double t_hot = 0.0;   // 0 -> max|Q| * n
  double t_cold = 0.0;  // 0 -> 1e-3 * min nonzero |Q|
  std::uint64_t seed = 0;

  void validate() const {
    if (reads < 1 || sweeps < 1) throw QaeError("SaParams: bad reads/sweeps");
    if (t_hot != 0.0 && t_cold != 0.0 && !(t_hot > t_cold))
      throw QaeError("SaParams: t_hot must exceed t_cold");
  }
};

struct SolverResult {
  BitString best_bits;
  double best_energy = 0.0;  // always re-evaluated from best_bits
  std::uint64_t evaluations = 0;
  double wall_time = 0.0;
};

namespace detail {

// Current assignment plus the field vector f_i = Q_ii + sum_{t!=i} Q_it x_t.
// The flip gain is gain(i) = (1-2x_i) f_i; a flip updates all fields in O(n).
// A dense symmetric copy of Q gives stride-1 row access.
struct FlipState {
  int n = 0;
  BitString x;
  std::vector<double> f;
  std::vector<double> rows;  // n*n dense symmetric copy
  double energy = 0.0;

  explicit FlipState(const Qubo& q) : n(q.n()), x(q.n(), 0), f(q.n()) {
    rows.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      f[i] = q.at(i, i);
      for (int j = i + 1; j < n; ++j) {
        const double v = q.at(i, j);
        rows[std::size_t(i) * n + j] = v;
        rows[std::size_t(j) * n + i] = v;
      }
    }
  }

  double gain(int i) const { return x[i] ? -f[i] : f[i]; }

  void flip(int i) {
    energy += gain(i);
    const double dx = x[i] ? -1.0 : 1.0;
    x[i] ^= 1;
    const double* row = rows.data() + std::size_t(i) * n;
    for (int t = 0; t < n; ++t) f[t] += row[t] * dx;
    f[i] -= row[i] * dx;  // row[i] is 0, kept for clarity
  }

  // Exact recomputation, used at candidate checks and periodic resyncs so
  // incremental drift can never decide a comparison.
  void resync(const Qubo& q) {
    energy = qubo_energy(q, x);
    for (int i = 0; i < n; ++i) {
      double s = q.at(i, i);
      for (int t = 0; t < n; ++t)
        if (t != i && x[t]) s += q.at(i, t);
      f[i] = s;
    }
  }
};

inline bool lex_less(const BitString& a, const BitString& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

// Full enumeration in Gray-code order; ties broken by the lexicographically
// smallest bitstring. Hard limit n <= 30.
inline SolverResult exact_solve(const Qubo& q) {
  if (q.n() > 30) throw QaeError("exact_solve: n too large (limit 30)");
  Timer timer;
  detail::FlipState st(q);
  const double guard = 1e-9 * std::max(1.0, q.sum_abs());

  SolverResult res;
  res.best_bits = st.x;  // all-zero start, energy 0
  res.best_energy = 0.0;
  const std::uint64_t total = 1ULL << q.n();
  for (std::uint64_t t = 1; t < total; ++t) {
    if ((t & 0xFFFFULL) == 0) st.resync(q);
    const int j = int(__builtin_ctzll(t));
    st.flip(j);
    if (st.energy <= res.best_energy + guard) {
      const double fresh = qubo_energy(q, st.x);
      if (fresh < res.best_energy ||
          (fresh == res.best_energy && detail::lex_less(st.x, res.best_bits))) {
        res.best_energy = fresh;
        res.best_bits = st.x;
      }
    }
  }
  res.evaluations = total;
  res.best_energy = qubo_energy(q, res.best_bits);
  res.wall_time = timer.seconds();
  return res;
}

// 1-flip Tabu search. Admissible moves are non-tabu ones plus any move that
// strictly improves the global best (aspiration); among admissible moves the
// lowest gain wins, smallest index on ties. Stops after n_rep consecutive
// non-improving moves, counted across restarts: whenever a segment stalls for
// 2n moves the walk restarts from a seeded state (alternating uniform random
// bits and a sparse perturbation of the best), which is what lets the search
// escape the all-zero attractor on narrow-well QAE instances. Deterministic
// given the seed. best_trace, when given, records the best energy after every
// improvement.
inline SolverResult tabu_solve(const Qubo& q, const TabuParams& params,
                               std::vector<double>* best_trace = nullptr) {
  params.validate();
  Timer timer;
  const int n = q.n();
  detail::FlipState st(q);

  SolverResult res;
  res.best_bits = st.x;  // segment 0 starts from the all-zero state
  res.best_energy = 0.0;
  if (best_trace) best_trace->push_back(res.best_energy);

  std::vector<std::int64_t> tabu_until(n, -1);
  std::int64_t iter = 0;
  int non_improve = 0;
  int stall = 0;
  const int stall_limit = std::max(2 * n, 64);
  std::uint64_t segment = 0;
  while (non_improve < params.n_rep) {
    int move = -1;
    double move_gain = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double g = st.gain(i);
      const bool tabu = tabu_until[i] > iter;
      if (tabu && !(st.energy + g < res.best_energy)) continue;
      if (g < move_gain) {
        move_gain = g;
        move = i;
      }
    }
    if (move < 0) {
      // everything tabu and nothing aspires: take the oldest tabu move
      std::int64_t oldest = std::numeric_limits<std::int64_t>::max();
      for (int i = 0; i < n; ++i)
        if (tabu_until[i] < oldest) {
          oldest = tabu_until[i];
          move = i;
        }
    }
    st.flip(move);
    tabu_until[move] = iter + params.tenure;
    ++iter;
    if ((iter & 0xFFF) == 0) st.resync(q);
    res.evaluations += std::uint64_t(n);

    if (st.energy < res.best_energy) {
      const double fresh = qubo_energy(q, st.x);
      if (fresh < res.best_energy) {
        res.best_energy = fresh;
        res.best_bits = st.x;
        non_improve = 0;
        stall = 0;
        if (best_trace) best_trace->push_back(fresh);
        continue;
      }
      if (fresh == res.best_energy && detail::lex_less(st.x, res.best_bits))
        res.best_bits = st.x;
    }
    ++non_improve;
    if (++stall >= stall_limit && non_improve < params.n_rep) {
      stall = 0;
      ++segment;
      Rng rng(hash_seed(params.seed, 0xd1feULL, segment));
      BitString start(res.best_bits);
      if (segment & 1) {
        for (int i = 0; i < n; ++i)
          start[i] = std::uint8_t(rng.next_u64() & 1);
      } else {
        int flipped = 0;
        for (int i = 0; i < n; ++i)
          if (rng.below(8) == 0) {
            start[i] ^= 1;
            ++flipped;
          }
        if (flipped == 0) start[int(rng.below(std::uint32_t(n)))] ^= 1;
      }
      for (int i = 0; i < n; ++i)
        if (st.x[i] != start[i]) st.flip(i);
      st.resync(q);
      std::fill(tabu_until.begin(), tabu_until.end(), std::int64_t(-1));
    }
  }
  res.best_energy = qubo_energy(q, res.best_bits);
  res.wall_time = timer.seconds();
  return res;
}

// Backbone-style decomposition. Problems up to subqubo_size go straight to
// exact_solve / tabu_solve. Larger ones iterate: rank variables by |flip
// gain| at the current state, clamp everything outside the active block,
// solve the clamped sub-QUBO (linear terms absorb couplings to clamped 1s),
// accept on improvement. On a non-improving pass the active block rotates
// down the ranking; the state only changes on improvement, so once every
// block has been tried without change the search is at a deterministic fixed
// point and the state is re-diversified from a seeded start (alternating
// uniform random bits and sparse perturbations of the best). The pass budget
// caps at min(n_rep, 8 * blocks) consecutive non-improving passes.
inline SolverResult partitioned_solve(const Qubo& q,
                                      const TabuParams& params) {
  params.validate();
  const int n = q.n();
  auto sub_solver = [&](const Qubo& sub) {
    if (sub.n() <= params.exact_threshold && sub.n() <= 30)
      return exact_solve(sub);
    return tabu_solve(sub, params);
  };
  if (n <= params.subqubo_size) return sub_solver(q);

  Timer timer;
  detail::FlipState st(q);
  SolverResult res;
  res.best_bits = st.x;  // round 0 starts from the all-zero state
  res.best_energy = 0.0;

  const int s = params.subqubo_size;
  const int blocks = (n + s - 1) / s;
  std::vector<int> ranked(n);
  int rotation = 0;
  int local_stall = 0;   // passes since the current descent last accepted
  int global_stall = 0;  // passes since the global best last improved
  std::uint64_t round = 0;
  const int stop_after = std::min(params.n_rep, 8 * blocks);
  while (global_stall < stop_after) {
    std::iota(ranked.begin(), ranked.end(), 0);
    std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
      return std::abs(st.gain(a)) > std::abs(st.gain(b));
    });
    const int lo = rotation * s;
    const int hi = std::min(lo + s, n);
    std::vector<int> active(ranked.begin() + lo, ranked.begin() + hi);
    std::sort(active.begin(), active.end());
    const int ns = int(active.size());

    Qubo sub(ns);
    for (int a = 0; a < ns; ++a) {
      const int ia = active[a];
      double diag = q.at(ia, ia);
      for (int t = 0; t < n; ++t)
        if (t != ia && st.x[t]) diag += q.at(ia, t);
      for (int b = a + 1; b < ns; ++b) {
        const int ib = active[b];
        if (st.x[ib]) diag -= q.at(ia, ib);  // counted as clamped above
        sub.set(a, b, q.at(ia, ib));
      }
      for (int b = 0; b < a; ++b)
        if (st.x[active[b]]) diag -= q.at(ia, active[b]);
      sub.set(a, a, diag);
    }
    BitString y0(ns);
    for (int a = 0; a < ns; ++a) y0[a] = st.x[active[a]];
    const double e0 = qubo_energy(sub, y0);

    TabuParams sub_params = params;
    sub_params.seed = hash_seed(params.seed, round, std::uint64_t(rotation));
    const SolverResult subres =
        (ns <= params.exact_threshold && ns <= 30)
            ? exact_solve(sub)
            : tabu_solve(sub, sub_params);
    res.evaluations += subres.evaluations;
    bool improved_best = false;
    if (subres.best_energy < e0) {
      for (int a = 0; a < ns; ++a)
        if (st.x[active[a]] != subres.best_bits[a]) st.flip(active[a]);
      st.resync(q);
      improved_best = st.energy < res.best_energy;
      if (improved_best ||
          (st.energy == res.best_energy &&
           detail::lex_less(st.x, res.best_bits))) {
        res.best_bits = st.x;
        res.best_energy = st.energy;
      }
      local_stall = 0;
      rotation = 0;
    } else {
      ++local_stall;
      rotation = (rotation + 1) % blocks;
    }
    global_stall = improved_best ? 0 : global_stall + 1;
    if (local_stall >= blocks && global_stall < stop_after) {
      // deterministic fixed point for this round: re-diversify
      local_stall = 0;
      rotation = 0;
      ++round;
      Rng rng(hash_seed(params.seed, 0xba5eULL, round));
      BitString start(res.best_bits);
      if (round & 1) {
        for (int i = 0; i < n; ++i)
          start[i] = std::uint8_t(rng.next_u64() & 1);
      } else {
        int flipped = 0;
        for (int i = 0; i < n; ++i)
          if (rng.below(8) == 0) {
            start[i] ^= 1;
            ++flipped;
          }
        if (flipped == 0) start[int(rng.below(std::uint32_t(n)))] ^= 1;
      }
      for (int i = 0; i < n; ++i)
        if (st.x[i] != start[i]) st.flip(i);
      st.resync(q);
    }
  }
  res.best_energy = qubo_energy(q, res.best_bits);
  res.wall_time = timer.seconds();
  return res;
}

// Independent Metropolis anneals on a geometric schedule; the global best is
// tracked across every visited state and merged by (energy, lexicographic
// bits), so the result is deterministic and a prefix property holds in reads
// (per-read stream seed = hash(seed, read)).
inline SolverResult sa_solve(const Qubo& q, const SaParams& params) {
  params.validate();
  Timer timer;
  const int n = q.n();

  double t_hot = params.t_hot;
  if (t_hot == 0.0) t_hot = std::max(q.max_abs() * n, 1e-12);
  double t_cold = params.t_cold;
  if (t_cold == 0.0) t_cold = std::max(1e-3 * q.min_abs_nonzero(), 1e-15);
  if (!(t_hot > t_cold)) t_hot = t_cold * 1e3;
  const double ratio = (params.sweeps > 1)
                           ? std::pow(t_cold / t_hot,
                                      1.0 / double(params.sweeps - 1))
                           : 1.0;

  detail::FlipState st(q);
  SolverResult res;
  res.best_bits = BitString(n, 0);
  res.best_energy = std::numeric_limits<double>::infinity();

  auto offer = [&](const Qubo& qq) {
    if (st.energy <= res.best_energy) {
      const double fresh = qubo_energy(qq, st.x);
      if (fresh < res.best_energy ||
          (fresh == res.best_energy && detail::lex_less(st.x, res.best_bits))) {
        res.best_energy = fresh;
        res.best_bits = st.x;
      }
    }
  };

  for (int read = 0; read < params.reads; ++read) {
    Rng rng(hash_seed(params.seed, std::uint64_t(read)));
    for (int i = 0; i < n; ++i) st.x[i] = std::uint8_t(rng.next_u64() & 1);
    st.resync(q);
    offer(q);
    double t = t_hot;
    for (int sweep = 0; sweep < params.sweeps; ++sweep, t *= ratio) {
      for (int p = 0; p < n; ++p) {
        const int j = int(rng.below(std::uint32_t(n)));
        const double g = st.gain(j);
        bool accept = g <= 0.0;
        if (!accept) accept = rng.u01() < std::exp(-g / t);
        if (accept) {
          st.flip(j);
          if (st.energy <= res.best_energy) offer(q);
        }
      }
    }
    res.evaluations += std::uint64_t(params.sweeps) * std::uint64_t(n) + 1;
  }
  res.best_energy = qubo_energy(q, res.best_bits);
  res.wall_time = timer.seconds();
  return res;
}

}  // namespace qae
