// qae/driver.hpp -- the QAE outer loop: scan the normalization penalty
// lambda, solve each QUBO, discard trivial solutions, renormalize, and build
// excited states by deflation.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qae/common.hpp"
#include "qae/hardware.hpp"
#include "qae/linalg.hpp"
#include "qae/qubo.hpp"
#include "qae/solvers.hpp"

namespace qae {

namespace defaults {
inline constexpr double kTrivialNorm = 1e-6;
inline constexpr double kS0 = 9000.0;          // deflation shift, cm^-1
inline constexpr double kOverlapWarn = 0.9;
// Fallback d_lambda widening for small K when a problem ships no explicit
// override table: the encoding grid is so coarse there that the window must
// stretch far above the spectrum bottom.
inline constexpr double kSmallKFactor1 = 40.0;   // K = 1
inline constexpr double kSmallKFactor23 = 10.0;  // K = 2, 3
}  // namespace defaults

// lambda_j = lambda_min + j*d_lambda, j = 0..n_lambda-1. If the override
// table is present it is taken literally (missing K -> base step); if absent
// the small-K heuristic above applies.
struct ScanSpec {
  double lambda_min = 0.0;
  int n_lambda = 1;
  double d_lambda = 1.0;
  std::optional<std::map<int, double>> small_k_d_lambda;

  void validate() const {
    if (n_lambda < 1) throw QaeError("ScanSpec: n_lambda must be >= 1");
    if (!(d_lambda > 0.0)) throw QaeError("ScanSpec: d_lambda must be > 0");
  }

  double step_for(int k) const {
    if (small_k_d_lambda) {
      const auto it = small_k_d_lambda->find(k);
      return it != small_k_d_lambda->end() ? it->second : d_lambda;
    }
    if (k == 1) return defaults::kSmallKFactor1 * d_lambda;
    if (k == 2 || k == 3) return defaults::kSmallKFactor23 * d_lambda;
    return d_lambda;
  }

  double lambda_at(int j, int k) const {
    return lambda_min + double(j) * step_for(k);
  }
};

enum class SolverKind { exact, tabu, partitioned, sa };

inline std::string solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::exact: return "exact";
    case SolverKind::tabu: return "tabu";
    case SolverKind::partitioned: return "partitioned";
    case SolverKind::sa: return "sa";
  }
  return "?";
}

inline SolverKind solver_from_name(const std::string& s) {
  if (s == "exact") return SolverKind::exact;
  if (s == "tabu") return SolverKind::tabu;
  if (s == "partitioned") return SolverKind::partitioned;
  if (s == "sa") return SolverKind::sa;
  throw QaeError("unknown solver '" + s + "'");
}

struct SolverSpec {
  SolverKind kind = SolverKind::partitioned;
  TabuParams tabu;
  SaParams sa;

  SolverResult run(const Qubo& q, std::uint64_t seed) const {
    switch (kind) {
      case SolverKind::exact:
        return exact_solve(q);
      case SolverKind::tabu: {
        TabuParams p = tabu;
        p.seed = seed;
        return tabu_solve(q, p);
      }
      case SolverKind::partitioned: {
        TabuParams p = tabu;
        p.seed = seed;
        return partitioned_solve(q, p);
      }
      case SolverKind::sa: {
        SaParams p = sa;
        p.seed = seed;
        return sa_solve(q, p);
      }
    }
    throw QaeError("SolverSpec: unknown kind");
  }
};

// One lambda sample of the trace: energy present iff the sample survived the
// trivial-solution filter.
struct TracePoint {
  double lambda = 0.0;
  std::optional<double> energy;
};

struct QaeResult {
  double energy = 0.0;        // renormalized Rayleigh quotient, cm^-1
  Vector wavefunction;        // unit norm, largest-|coefficient| sign positive
  double best_lambda = 0.0;
  double raw_norm = 0.0;      // ||a|| before renormalization
  std::vector<TracePoint> per_lambda_trace;
  double solver_seconds = 0.0;  // accumulated wall time inside the solver
  bool overlap_warning = false;
  double max_prior_overlap = 0.0;
};

struct SpectrumState {
  std::vector<std::pair<double, Vector>> states;  // (energy, wavefunction)
  double s0 = defaults::kS0;
};

namespace detail {
inline void fix_sign(Vector& v) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
}
}  // namespace detail

// Scan lambda, solve, keep the lowest renormalized Rayleigh quotient among
// non-trivial samples. Noise, when given, is re-sampled per lambda sample;
// solver streams are also per-sample so parallel evaluation orders cannot
// matter. Throws when every sample is trivial.
inline QaeResult ground_state(const SymMatrix& h, int k, const ScanSpec& scan,
                              const SolverSpec& solver,
                              const NoiseSpec* noise = nullptr,
                              std::uint64_t seed = 0) {
  scan.validate();
  if (k < 1) throw QaeError("ground_state: K must be >= 1");
  const Encoding enc(k, h.n());

  QaeResult out;
  out.per_lambda_trace.reserve(scan.n_lambda);
  Vector best_a;
  bool found = false;
  for (int j = 0; j < scan.n_lambda; ++j) {
    const double lambda = scan.lambda_at(j, k);
    Qubo q = build_qubo(h, enc, lambda);
    if (noise && noise->scale > 0.0) {
      NoiseSpec per = *noise;
      per.seed = hash_seed(noise->seed, std::uint64_t(j));
      q = apply_noise(q, per);
    }
    const SolverResult r = solver.run(q, hash_seed(seed, std::uint64_t(j)));
    out.solver_seconds += r.wall_time;
    const Vector a = decode(r.best_bits, enc);
    const double nrm = norm(a);
    TracePoint tp;
    tp.lambda = lambda;
    if (nrm < defaults::kTrivialNorm) {
      out.per_lambda_trace.push_back(tp);
      continue;
    }
    const double energy = rayleigh_quotient(h, a);
    tp.energy = energy;
    out.per_lambda_trace.push_back(tp);
    if (!found || energy < out.energy) {
      found = true;
      out.energy = energy;
      out.best_lambda = lambda;
      out.raw_norm = nrm;
      best_a = a;
    }
  }
  if (!found)
    throw QaeError("all trivial solutions; increase d_lambda");
  out.wavefunction = best_a;
  const double nrm = norm(out.wavefunction);
  for (double& x : out.wavefunction) x /= nrm;
  detail::fix_sign(out.wavefunction);
  return out;
}

// Deflate h by every prior state (shift s0), run the ground-state scan on
// H', and report the energy of the found vector under the ORIGINAL h. A large
// overlap with a prior state means s0 was too small to clear it; flagged, not
// fatal.
inline QaeResult excited_state(const SymMatrix& h, const SpectrumState& prior,
                               int k, const ScanSpec& scan,
                               const SolverSpec& solver,
                               const NoiseSpec* noise = nullptr,
                               std::uint64_t seed = 0) {
  SymMatrix hp = h;
  for (const auto& [energy, psi] : prior.states) hp = deflate(hp, psi, prior.s0);
  QaeResult out = ground_state(hp, k, scan, solver, noise, seed);
  out.energy = rayleigh_quotient(h, out.wavefunction);
  for (const auto& [energy, psi] : prior.states) {
    const double overlap = std::abs(dot(out.wavefunction, psi));
    out.max_prior_overlap = std::max(out.max_prior_overlap, overlap);
  }
  out.overlap_warning = out.max_prior_overlap > defaults::kOverlapWarn;
  return out;
}

// Full spectrum by repeated deflation. scans[i] drives state i; the last
// entry repeats when fewer scans than states are given. State seeds derive
// from the base seed and the state index.
inline SpectrumState spectrum(const SymMatrix& h, int n_states, int k,
                              const std::vector<ScanSpec>& scans,
                              const SolverSpec& solver,
                              double s0 = defaults::kS0,
                              const NoiseSpec* noise = nullptr,
                              std::uint64_t seed = 0,
                              std::vector<QaeResult>* results = nullptr) {
  if (n_states < 1 || n_states > h.n())
    throw QaeError("spectrum: n_states must lie in [1, dim(h)]");
  if (scans.empty()) throw QaeError("spectrum: need at least one ScanSpec");
  if (!(s0 > 0.0)) throw QaeError("spectrum: s0 must be > 0");
  SpectrumState st;
  st.s0 = s0;
  for (int i = 0; i < n_states; ++i) {
    const ScanSpec& scan = scans[std::min<std::size_t>(i, scans.size() - 1)];
    const std::uint64_t state_seed = hash_seed(seed, 0x57a7eULL, i);
    QaeResult r = (i == 0)
                      ? ground_state(h, k, scan, solver, noise, state_seed)
                      : excited_state(h, st, k, scan, solver, noise,
                                      state_seed);
    st.states.emplace_back(r.energy, r.wavefunction);
    if (results) results->push_back(std::move(r));
  }
  return st;
}

}  // namespace qae
