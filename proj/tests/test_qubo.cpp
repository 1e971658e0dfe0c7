#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qae/common.hpp"
#include "qae/qubo.hpp"

using namespace qae;

namespace {

// every bitstring of length n, in counting order
std::vector<BitString> all_bits(int n) {
  std::vector<BitString> out;
  for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
    BitString x(n, 0);
    for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1u;
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("encoding weights") {
  Encoding e3(3, 1);
  REQUIRE(e3.weight(1) == 0.25);
  REQUIRE(e3.weight(2) == 0.5);
  REQUIRE(e3.weight(3) == -1.0);
  Encoding e1(1, 5);
  REQUIRE(e1.weight(1) == -1.0);
  REQUIRE(e1.n_vars() == 5);
  REQUIRE_THROWS_AS(e1.weight(2), QaeError);
  REQUIRE_THROWS_AS(Encoding(0, 1), QaeError);
}

TEST_CASE("coeff_value") {
  REQUIRE(coeff_value({1, 1, 0}, 3) == 0.75);
  REQUIRE(coeff_value({0, 0, 1}, 3) == -1.0);
  REQUIRE(coeff_value({1, 1, 1}, 3) == -0.25);
  REQUIRE(coeff_value({1}, 1) == -1.0);
  REQUIRE(coeff_value({0}, 1) == 0.0);
  REQUIRE_THROWS_AS(coeff_value({0, 1}, 3), QaeError);
}

TEST_CASE("decoded coefficients cover the fixed-point grid exactly") {
  for (int k = 1; k <= 6; ++k) {
    const double step = std::ldexp(1.0, 1 - k);
    std::vector<double> seen;
    for (const auto& bits : all_bits(k)) seen.push_back(coeff_value(bits, k));
    std::sort(seen.begin(), seen.end());
    REQUIRE(seen.front() == -1.0);
    REQUIRE(seen.back() == 1.0 - step);
    for (std::size_t i = 1; i < seen.size(); ++i)
      REQUIRE(seen[i] - seen[i - 1] == step);  // exact dyadics
  }
}

TEST_CASE("decode splits a bitstring per coefficient") {
  Encoding enc(2, 3);
  // coefficients: (q1,q2) = (1,0) -> 0.5, (0,1) -> -1, (1,1) -> -0.5
  const Vector a = decode({1, 0, 0, 1, 1, 1}, enc);
  REQUIRE(a == Vector{0.5, -1.0, -0.5});
  REQUIRE_THROWS_AS(decode({0, 1}, enc), QaeError);
}

TEST_CASE("variable_index matches the closed forms") {
  // 1D: i = K*(alpha-1) + k
  Encoding e7(7, 16);
  REQUIRE(variable_index({9}, 7, e7, 16, 1) == 63);
  REQUIRE(variable_index({1}, 1, e7, 16, 1) == 1);
  // 2D: i = K*B*(alpha-1) + K*(beta-1) + k
  Encoding e2(2, 9);
  REQUIRE(variable_index({2, 3}, 1, e2, 3, 2) == 2 * 3 * 1 + 2 * 2 + 1);
  REQUIRE_THROWS_AS(variable_index({0, 1}, 1, e2, 3, 2), QaeError);
  REQUIRE_THROWS_AS(variable_index({1}, 1, e2, 3, 2), QaeError);
  REQUIRE_THROWS_AS(variable_index({1, 1}, 3, e2, 3, 2), QaeError);
}

TEST_CASE("variable_index is a bijection onto 1..K*B^d") {
  for (int k = 1; k <= 3; ++k)
    for (int b = 1; b <= 3; ++b)
      for (int d = 1; d <= 3; ++d) {
        int cdim = 1;
        for (int t = 0; t < d; ++t) cdim *= b;
        Encoding enc(k, cdim);
        std::vector<int> hit(enc.n_vars() + 1, 0);
        std::vector<int> alpha(d, 1);
        while (true) {
          for (int kk = 1; kk <= k; ++kk)
            ++hit[variable_index(alpha, kk, enc, b, d)];
          int t = d - 1;
          while (t >= 0 && alpha[t] == b) alpha[t--] = 1;
          if (t < 0) break;
          ++alpha[t];
        }
        for (int i = 1; i <= enc.n_vars(); ++i) REQUIRE(hit[i] == 1);
      }
}

TEST_CASE("build_qubo coefficients, K = 1 and K = 2") {
  SymMatrix h(1);
  h.set(0, 0, 5.0);
  const Qubo q1 = build_qubo(h, Encoding(1, 1), 2.0);
  REQUIRE(q1.n() == 1);
  REQUIRE(q1.at(0, 0) == 3.0);  // c_1^2 (h - lambda), c_1 = -1

  const Qubo q2 = build_qubo(h, Encoding(2, 1), 2.0);
  REQUIRE(q2.n() == 2);
  REQUIRE(q2.at(0, 0) == 0.25 * 3.0);
  REQUIRE(q2.at(1, 1) == 3.0);
  REQUIRE(q2.at(0, 1) == 2.0 * 0.5 * -1.0 * 3.0);

  SymMatrix h2(2);
  h2.set(0, 0, 1.0);
  h2.set(1, 1, 2.0);
  h2.set(0, 1, 0.25);
  const Qubo q = build_qubo(h2, Encoding(1, 2), 0.0);
  REQUIRE(q.at(0, 0) == 1.0);
  REQUIRE(q.at(1, 1) == 2.0);
  REQUIRE(q.at(0, 1) == 2.0 * (-1.0) * (-1.0) * 0.25);
  REQUIRE_THROWS_AS(build_qubo(h2, Encoding(1, 3), 0.0), QaeError);
}

TEST_CASE("qubo_energy examples") {
  Qubo q(2);
  q.set(0, 0, -1.0);
  q.set(1, 1, 2.0);
  q.set(0, 1, 0.5);
  REQUIRE(qubo_energy(q, {1, 0}) == -1.0);
  REQUIRE(qubo_energy(q, {0, 0}) == 0.0);
  REQUIRE(qubo_energy(q, {1, 1}) == 1.5);
  REQUIRE_THROWS_AS(qubo_energy(q, {1}), QaeError);
}

TEST_CASE("qubo energy equals the quadratic form of the decoded vector") {
  Rng rng(4242);
  for (int trial = 0; trial < 8; ++trial) {
    const int c = 2 + int(rng.below(3));
    const int k = 1 + int(rng.below(3));
    SymMatrix h(c);
    for (int i = 0; i < c; ++i)
      for (int j = i; j < c; ++j) h.set(i, j, 4.0 * rng.u01() - 2.0);
    const double lambda = 3.0 * rng.u01() - 1.5;
    Encoding enc(k, c);
    const Qubo q = build_qubo(h, enc, lambda);
    SymMatrix shifted = h;
    for (int i = 0; i < c; ++i) shifted.add(i, i, -lambda);
    for (const auto& x : all_bits(enc.n_vars())) {
      const Vector a = decode(x, enc);
      REQUIRE_THAT(qubo_energy(q, x),
                   Catch::Matchers::WithinAbs(dot(a, shifted.matvec(a)),
                                              1e-10));
    }
  }
}

TEST_CASE("lambda enters only through the diagonal blocks") {
  SymMatrix h(3);
  h.set(0, 1, 1.0);
  h.set(1, 2, -2.0);
  h.set(0, 0, 4.0);
  Encoding enc(3, 3);
  const Qubo qa = build_qubo(h, enc, 7.0);
  const Qubo q0 = build_qubo(h, enc, 0.0);
  SymMatrix zeros(3);
  const Qubo qz = build_qubo(zeros, enc, 7.0);
  for (int i = 0; i < qa.n(); ++i)
    for (int j = i; j < qa.n(); ++j)
      REQUIRE_THAT(qa.at(i, j) - q0.at(i, j),
                   Catch::Matchers::WithinAbs(qz.at(i, j), 1e-12));
}

TEST_CASE("qubo text format round trip") {
  Qubo q(3);
  q.set(0, 0, -1.5);
  q.set(0, 2, 0.125);
  q.set(1, 2, 3.0);
  std::ostringstream os;
  write_qubo(q, os);
  std::istringstream is(os.str());
  const Qubo back = read_qubo(is);
  REQUIRE(back.n() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) REQUIRE(back.at(i, j) == q.at(i, j));

  std::istringstream dup("n 2\n0 1 1.0\n0 1 0.5\n");
  REQUIRE(read_qubo(dup).at(0, 1) == 1.5);

  std::istringstream bad("m 2\n");
  REQUIRE_THROWS_AS(read_qubo(bad), QaeError);
  std::istringstream oob("n 2\n0 5 1.0\n");
  REQUIRE_THROWS_AS(read_qubo(oob), QaeError);
}

TEST_CASE("qubo magnitude helpers") {
  Qubo q(2);
  q.set(0, 0, -4.0);
  q.set(0, 1, 0.5);
  REQUIRE(q.max_abs() == 4.0);
  REQUIRE(q.min_abs_nonzero() == 0.5);
  REQUIRE(q.sum_abs() == 4.5);
}
