#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "qae/driver.hpp"
#include "qae/hamiltonian.hpp"

using namespace qae;

namespace {

SymMatrix diag3() {
  SymMatrix h(3);
  h.set(0, 0, 1.0);
  h.set(1, 1, 5.0);
  h.set(2, 2, 9.0);
  return h;
}

ScanSpec literal_scan(double lambda_min, int n_lambda, double d_lambda) {
  ScanSpec s;
  s.lambda_min = lambda_min;
  s.n_lambda = n_lambda;
  s.d_lambda = d_lambda;
  s.small_k_d_lambda = std::map<int, double>{};  // empty table: no widening
  return s;
}

SolverSpec exact_spec() {
  SolverSpec s;
  s.kind = SolverKind::exact;
  return s;
}

}  // namespace

TEST_CASE("scan step widening: heuristic vs explicit table") {
  ScanSpec s;
  s.lambda_min = 100.0;
  s.n_lambda = 5;
  s.d_lambda = 10.0;
  // no table: small-K heuristic
  REQUIRE(s.step_for(1) == 400.0);
  REQUIRE(s.step_for(2) == 100.0);
  REQUIRE(s.step_for(3) == 100.0);
  REQUIRE(s.step_for(4) == 10.0);
  REQUIRE(s.lambda_at(2, 1) == 900.0);
  REQUIRE(s.lambda_at(2, 8) == 120.0);

  // explicit table is literal, even when empty
  s.small_k_d_lambda = std::map<int, double>{};
  REQUIRE(s.step_for(1) == 10.0);
  s.small_k_d_lambda = std::map<int, double>{{1, 400.0}, {2, 200.0}};
  REQUIRE(s.step_for(1) == 400.0);
  REQUIRE(s.step_for(2) == 200.0);
  REQUIRE(s.step_for(3) == 10.0);

  ScanSpec bad;
  bad.n_lambda = 0;
  REQUIRE_THROWS_AS(bad.validate(), QaeError);
  bad.n_lambda = 1;
  bad.d_lambda = 0.0;
  REQUIRE_THROWS_AS(bad.validate(), QaeError);
}

TEST_CASE("solver names round trip") {
  for (auto k : {SolverKind::exact, SolverKind::tabu, SolverKind::partitioned,
                 SolverKind::sa})
    REQUIRE(solver_from_name(solver_name(k)) == k);
  REQUIRE_THROWS_AS(solver_from_name("annealer"), QaeError);
}

TEST_CASE("ground state of a diagonal matrix") {
  const QaeResult r =
      ground_state(diag3(), 4, literal_scan(1.5, 1, 1.0), exact_spec());
  REQUIRE(r.energy == 1.0);
  REQUIRE(r.best_lambda == 1.5);
  REQUIRE(r.raw_norm == 1.0);  // a = (-1, 0, 0)
  REQUIRE(r.wavefunction == Vector{1.0, 0.0, 0.0});  // sign gauge
  REQUIRE(r.per_lambda_trace.size() == 1);
  REQUIRE(r.per_lambda_trace[0].energy.has_value());
}

TEST_CASE("trivial samples are filtered but stay in the trace") {
  // lambda below the spectrum keeps (H - lambda I) positive definite, so the
  // zero string wins there and the sample is discarded.
  const QaeResult r =
      ground_state(diag3(), 2, literal_scan(0.2, 4, 0.6), exact_spec());
  REQUIRE(r.per_lambda_trace.size() == 4);
  REQUIRE_FALSE(r.per_lambda_trace[0].energy.has_value());
  REQUIRE_FALSE(r.per_lambda_trace[1].energy.has_value());
  REQUIRE(r.per_lambda_trace[2].energy.has_value());
  REQUIRE(r.per_lambda_trace[3].energy.has_value());
  REQUIRE(r.energy == 1.0);
  REQUIRE(r.best_lambda == 1.4);  // ties keep the first best

  REQUIRE_THROWS_WITH(
      ground_state(diag3(), 2, literal_scan(0.2, 2, 0.1), exact_spec()),
      Catch::Matchers::ContainsSubstring("all trivial"));
}

TEST_CASE("found energies are variational") {
  Rng rng(31);
  SymMatrix h(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) h.set(i, j, 6.0 * rng.u01() - 3.0);
  const EigenDecomposition ed = jacobi_eigen(h);
  const QaeResult r = ground_state(
      h, 3, literal_scan(ed.eigenvalues[0] - 0.5, 6, 0.7), exact_spec());
  REQUIRE(r.energy >= ed.eigenvalues[0] - 1e-9);
  REQUIRE_THAT(norm(r.wavefunction), Catch::Matchers::WithinAbs(1.0, 1e-12));
  // exact solver ignores the stream seed entirely
  const QaeResult r2 = ground_state(
      h, 3, literal_scan(ed.eigenvalues[0] - 0.5, 6, 0.7), exact_spec(),
      nullptr, 999);
  REQUIRE(r.energy == r2.energy);
  REQUIRE(r.wavefunction == r2.wavefunction);
}

TEST_CASE("spectrum by deflation on diag(1,5,9)") {
  std::vector<ScanSpec> scans = {literal_scan(1.5, 1, 1.0),
                                 literal_scan(5.5, 1, 1.0),
                                 literal_scan(9.5, 1, 1.0)};
  std::vector<QaeResult> results;
  const SpectrumState st = spectrum(diag3(), 3, 4, scans, exact_spec(),
                                    9000.0, nullptr, 0, &results);
  REQUIRE(st.states.size() == 3);
  REQUIRE(st.states[0].first == 1.0);
  REQUIRE(st.states[1].first == 5.0);
  REQUIRE(st.states[2].first == 9.0);
  REQUIRE(results[1].max_prior_overlap == 0.0);
  REQUIRE_FALSE(results[2].overlap_warning);
  // deflated energies are reported under the original matrix
  REQUIRE(results[1].energy ==
          rayleigh_quotient(diag3(), results[1].wavefunction));
}

TEST_CASE("spectrum repeats the last scan when fewer scans than states") {
  SymMatrix h(2);
  h.set(0, 0, 1.0);
  h.set(1, 1, 5.0);
  std::vector<QaeResult> results;
  const SpectrumState st =
      spectrum(h, 2, 2, {literal_scan(0.8, 6, 1.0)}, exact_spec(), 9000.0,
               nullptr, 0, &results);
  REQUIRE(st.states[0].first == 1.0);
  REQUIRE(st.states[1].first == 5.0);
}

TEST_CASE("undersized deflation shift trips the overlap warning") {
  SymMatrix h(2);
  h.set(0, 0, 1.0);
  h.set(1, 1, 5.0);
  SpectrumState prior;
  prior.s0 = 0.5;  // deflated ground is still the old ground at 1.5
  prior.states.emplace_back(1.0, Vector{1.0, 0.0});
  const QaeResult r = excited_state(h, prior, 4, literal_scan(1.7, 1, 1.0),
                                    exact_spec());
  REQUIRE(r.overlap_warning);
  REQUIRE_THAT(r.max_prior_overlap, Catch::Matchers::WithinAbs(1.0, 1e-12));
  REQUIRE(r.energy == 1.0);  // reported under the original h
}

TEST_CASE("noise in the driver is seeded and optional") {
  const SymMatrix h = build_product_hamiltonian(harmonic_problem(1, 4));
  NoiseSpec noise;
  noise.scale = 3.0;
  noise.seed = 21;
  const ScanSpec scan = literal_scan(700.0, 4, 120.0);
  const QaeResult a = ground_state(h, 3, scan, exact_spec(), &noise);
  const QaeResult b = ground_state(h, 3, scan, exact_spec(), &noise);
  REQUIRE(a.energy == b.energy);
  REQUIRE(a.wavefunction == b.wavefunction);
  REQUIRE(a.best_lambda == b.best_lambda);

  NoiseSpec off;
  off.scale = 0.0;
  const QaeResult clean = ground_state(h, 3, scan, exact_spec());
  const QaeResult clean2 = ground_state(h, 3, scan, exact_spec(), &off);
  REQUIRE(clean.energy == clean2.energy);
  // clean energies are variational; noisy ones still get re-evaluated under
  // the clean h, so they cannot undercut the true ground state either
  const EigenDecomposition ed = jacobi_eigen(h);
  REQUIRE(a.energy >= ed.eigenvalues[0] - 1e-9);
  REQUIRE(clean.energy >= ed.eigenvalues[0] - 1e-9);
}

TEST_CASE("driver argument validation") {
  REQUIRE_THROWS_AS(
      ground_state(diag3(), 0, literal_scan(1.5, 1, 1.0), exact_spec()),
      QaeError);
  REQUIRE_THROWS_AS(spectrum(diag3(), 4, 2, {literal_scan(1.5, 1, 1.0)},
                             exact_spec()),
                    QaeError);
  REQUIRE_THROWS_AS(spectrum(diag3(), 1, 2, {}, exact_spec()), QaeError);
  REQUIRE_THROWS_AS(spectrum(diag3(), 1, 2, {literal_scan(1.5, 1, 1.0)},
                             exact_spec(), 0.0),
                    QaeError);
}
