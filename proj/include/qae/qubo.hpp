// qae/qubo.hpp -- fixed-point qubit encoding of expansion coefficients and
// the QUBO assembly for the functional F = <Psi|H|Psi> - lambda <Psi|Psi>.
#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qae/linalg.hpp"

namespace qae {

using BitString = std::vector<std::uint8_t>;

// K qubits per coefficient, C coefficients (C = B^d). Coefficient weights are
// c_k = 2^(k-K) for k = 1..K-1 and c_K = -1, so a decoded coefficient lies on
// the grid [-1, 1 - 2^(1-K)] with step 2^(1-K). Qubit k of coefficient alpha
// (both 1-based) sits at variable i = K*(alpha-1) + k.
struct Encoding {
  int k = 1;
  int c = 1;

  Encoding(int k_, int c_) : k(k_), c(c_) {
    if (k < 1 || c < 1) throw QaeError("Encoding: K and C must be >= 1");
  }
  int n_vars() const { return k * c; }

  // weight of qubit kk = 1..K (1-based, as in the formulas)
  double weight(int kk) const {
    if (kk < 1 || kk > k) throw QaeError("Encoding: qubit index out of range");
    if (kk == k) return -1.0;
    return std::ldexp(1.0, kk - k);  // 2^(kk-K)
  }
};

// Value of one coefficient from its K bits (bit order q_1..q_K).
inline double coeff_value(const BitString& bits, int k) {
  if (int(bits.size()) != k) throw QaeError("coeff_value: length mismatch");
  double a = 0.0;
  for (int kk = 1; kk < k; ++kk)
    if (bits[kk - 1]) a += std::ldexp(1.0, kk - k);
  if (bits[k - 1]) a -= 1.0;
  return a;
}

// 1-based variable index for the multi-dimensional coefficient index
// (alpha_1..alpha_d, each 1..B) and qubit k: the composite coefficient index
// runs row-major with alpha_1 slowest, reproducing i = K*B*(alpha-1) +
// K*(beta-1) + k in 2D.
inline int variable_index(const std::vector<int>& alpha_multi, int k_qubit,
                          const Encoding& enc, int b, int d) {
  if (int(alpha_multi.size()) != d)
    throw QaeError("variable_index: multi-index length != d");
  if (k_qubit < 1 || k_qubit > enc.k)
    throw QaeError("variable_index: qubit index out of range");
  long composite = 0;
  for (int t = 0; t < d; ++t) {
    const int a = alpha_multi[t];
    if (a < 1 || a > b) throw QaeError("variable_index: alpha out of range");
    composite = composite * b + (a - 1);
  }
  const long i = long(enc.k) * composite + k_qubit;
  if (i > enc.n_vars())
    throw QaeError("variable_index: index exceeds K*B^d");
  return int(i);
}

// Upper-triangular QUBO table over n binary variables (dense storage; QAE
// instances are dense). Objective: sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j.
class Qubo {
 public:
  Qubo() = default;
  explicit Qubo(int n) : n_(n), a_(std::size_t(n) * (n + 1) / 2, 0.0) {
    if (n < 1) throw QaeError("Qubo: n must be >= 1");
  }

  int n() const { return n_; }
  double at(int i, int j) const { return a_[idx(i, j)]; }
  void set(int i, int j, double v) { a_[idx(i, j)] = v; }
  void add(int i, int j, double v) { a_[idx(i, j)] += v; }
  const std::vector<double>& raw() const { return a_; }
  std::vector<double>& raw() { return a_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }
  double min_abs_nonzero() const {
    double m = 0.0;
    for (double v : a_)
      if (v != 0.0 && (m == 0.0 || std::abs(v) < m)) m = std::abs(v);
    return m;
  }
  double sum_abs() const {
    double s = 0.0;
    for (double v : a_) s += std::abs(v);
    return s;
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::size_t(i) * (2 * n_ - i - 1) / 2 + j;
  }
  int n_ = 0;
  std::vector<double> a_;
};

// Q from (H - lambda I): with weights c_k as above and 0-based variables,
//   Q_ii  = c_k^2       * (H-lambda I)_aa          (x^2 = x on the diagonal)
//   Q_ij  = 2 c_k c_l   * (H-lambda I)_ab   (i<j)
// so that qubo_energy(Q, x) = a^T (H - lambda I) a exactly for a = decode(x).
// The constant -lambda dropped from the derivation is never tracked; reported
// energies are recomputed Rayleigh quotients.
inline Qubo build_qubo(const SymMatrix& h, const Encoding& enc,
                       double lambda) {
  if (h.n() != enc.c)
    throw QaeError("build_qubo: matrix dimension != encoding C");
  const int k = enc.k;
  std::vector<double> w(k + 1);
  for (int kk = 1; kk <= k; ++kk) w[kk] = enc.weight(kk);

  Qubo q(enc.n_vars());
  for (int alpha = 0; alpha < enc.c; ++alpha) {
    const double maa = h.at(alpha, alpha) - lambda;
    for (int kk = 1; kk <= k; ++kk) {
      const int i = alpha * k + kk - 1;
      q.add(i, i, w[kk] * w[kk] * maa);
      for (int ll = kk + 1; ll <= k; ++ll)
        q.add(i, alpha * k + ll - 1, 2.0 * w[kk] * w[ll] * maa);
    }
    for (int beta = alpha + 1; beta < enc.c; ++beta) {
      const double mab = h.at(alpha, beta);
      if (mab == 0.0) continue;
      for (int kk = 1; kk <= k; ++kk)
        for (int ll = 1; ll <= k; ++ll)
          q.add(alpha * k + kk - 1, beta * k + ll - 1,
                2.0 * w[kk] * w[ll] * mab);
    }
  }
  return q;
}

// Bitstring -> coefficient vector (length C). NOT renormalized: the encoding
// breaks the normalization condition and the all-zero string decodes to the
// trivial solution Psi = 0.
inline Vector decode(const BitString& bits, const Encoding& enc) {
  if (int(bits.size()) != enc.n_vars())
    throw QaeError("decode: length mismatch");
  Vector a(enc.c, 0.0);
  for (int alpha = 0; alpha < enc.c; ++alpha) {
    double v = 0.0;
    for (int kk = 1; kk < enc.k; ++kk)
      if (bits[alpha * enc.k + kk - 1]) v += std::ldexp(1.0, kk - enc.k);
    if (bits[alpha * enc.k + enc.k - 1]) v -= 1.0;
    a[alpha] = v;
  }
  return a;
}

inline double qubo_energy(const Qubo& q, const BitString& x) {
  if (int(x.size()) != q.n()) throw QaeError("qubo_energy: length mismatch");
  double e = 0.0;
  for (int i = 0; i < q.n(); ++i) {
    if (!x[i]) continue;
    e += q.at(i, i);
    for (int j = i + 1; j < q.n(); ++j)
      if (x[j]) e += q.at(i, j);
  }
  return e;
}

// Plain-text triplet interchange format: header "n <n_vars>", then one
// "i j value" line (0-based, i <= j) per stored nonzero.
inline void write_qubo(const Qubo& q, std::ostream& os) {
  os << "n " << q.n() << "\n";
  for (int i = 0; i < q.n(); ++i)
    for (int j = i; j < q.n(); ++j)
      if (q.at(i, j) != 0.0)
        os << i << " " << j << " " << fmt_g17(q.at(i, j)) << "\n";
}

inline Qubo read_qubo(std::istream& is) {
  std::string tag;
  int n = 0;
  if (!(is >> tag >> n) || tag != "n" || n < 1)
    throw QaeError("read_qubo: expected header 'n <n_vars>'");
  Qubo q(n);
  int i, j;
  double v;
  while (is >> i >> j >> v) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw QaeError("read_qubo: index out of range");
    q.add(i, j, v);  // duplicates accumulate
  }
  return q;
}

}  // namespace qae
