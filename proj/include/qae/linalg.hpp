// qae/linalg.hpp -- dense real symmetric matrices and the cyclic Jacobi
// eigensolver used as the classical oracle for every QAE result.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "qae/common.hpp"

namespace qae {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

// Symmetric matrix, upper triangle stored row-major (diagonal included).
// entry(i,j) == entry(j,i) by construction; energies are plain doubles in
// cm^-1 throughout.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(std::size_t(n) * (n + 1) / 2, 0.0) {
    if (n < 1) throw QaeError("SymMatrix: dimension must be >= 1");
  }
  SymMatrix(int n, Vector upper) : n_(n), a_(std::move(upper)) {
    if (n < 1) throw QaeError("SymMatrix: dimension must be >= 1");
    if (a_.size() != std::size_t(n) * (n + 1) / 2)
      throw QaeError("SymMatrix: upper triangle has wrong length");
    for (double v : a_)
      if (!std::isfinite(v)) throw QaeError("SymMatrix: non-finite entry");
  }

  int n() const { return n_; }
  const Vector& upper() const { return a_; }

  double at(int i, int j) const { return a_[idx(i, j)]; }
  void set(int i, int j, double v) { a_[idx(i, j)] = v; }
  void add(int i, int j, double v) { a_[idx(i, j)] += v; }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
  }

  double frobenius() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      s += at(i, i) * at(i, i);
      for (int j = i + 1; j < n_; ++j) s += 2.0 * at(i, j) * at(i, j);
    }
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  // y = H x
  Vector matvec(const Vector& x) const {
    Vector y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += at(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::size_t(i) * (2 * n_ - i - 1) / 2 + j;
  }
  int n_ = 0;
  Vector a_;
};

struct EigenDecomposition {
  Vector eigenvalues;                // ascending
  std::vector<Vector> eigenvectors;  // eigenvectors[k] pairs with value k
};

// Cyclic Jacobi, row-major sweeps. Converges when the off-diagonal Frobenius
// norm drops below tol * ||H||_F; throws (with the residual in the message)
// if max_sweeps is exhausted first.
inline EigenDecomposition jacobi_eigen(const SymMatrix& h, double tol = 1e-12,
                                       int max_sweeps = 100) {
  if (tol <= 0.0) throw QaeError("jacobi_eigen: tol must be > 0");
  const int n = h.n();
  // Work on a full dense copy for stride-1 row access.
  std::vector<double> a(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[std::size_t(i) * n + j] = h.at(i, j);
  std::vector<double> v(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[std::size_t(i) * n + i] = 1.0;

  const double hf = std::max(h.frobenius(), 1e-300);
  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double w = a[std::size_t(i) * n + j];
        s += 2.0 * w * w;
      }
    return std::sqrt(s);
  };

  int sweep = 0;
  double off = off_norm();
  while (off > tol * hf) {
    if (sweep++ >= max_sweeps)
      throw QaeError("jacobi_eigen: no convergence after " +
                     std::to_string(max_sweeps) +
                     " sweeps; off-diagonal residual " + fmt_g17(off / hf));
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[std::size_t(p) * n + q];
        if (apq == 0.0) continue;
        const double app = a[std::size_t(p) * n + p];
        const double aqq = a[std::size_t(q) * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        // Stable rotation: t = sgn(theta)/(|theta| + sqrt(theta^2+1))
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[std::size_t(k) * n + p];
          const double akq = a[std::size_t(k) * n + q];
          a[std::size_t(k) * n + p] = c * akp - s * akq;
          a[std::size_t(k) * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[std::size_t(p) * n + k];
          const double aqk = a[std::size_t(q) * n + k];
          a[std::size_t(p) * n + k] = c * apk - s * aqk;
          a[std::size_t(q) * n + k] = s * apk + c * aqk;
        }
        a[std::size_t(p) * n + q] = 0.0;
        a[std::size_t(q) * n + p] = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v[std::size_t(k) * n + p];
          const double vkq = v[std::size_t(k) * n + q];
          v[std::size_t(k) * n + p] = c * vkp - s * vkq;
          v[std::size_t(k) * n + q] = s * vkp + c * vkq;
        }
      }
    }
    off = off_norm();
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return a[std::size_t(x) * n + x] < a[std::size_t(y) * n + y];
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.assign(n, Vector(n));
  for (int k = 0; k < n; ++k) {
    const int c = order[k];
    out.eigenvalues[k] = a[std::size_t(c) * n + c];
    for (int i = 0; i < n; ++i)
      out.eigenvectors[k][i] = v[std::size_t(i) * n + c];
  }
  return out;
}

// v^T H v / v^T v. Zero vectors are the QAE "trivial solution" and rejected.
inline double rayleigh_quotient(const SymMatrix& h, const Vector& v) {
  const double n2 = dot(v, v);
  if (n2 <= 0.0) throw QaeError("rayleigh_quotient: trivial solution");
  return dot(v, h.matvec(v)) / n2;
}

// H' = H + s0 * psi0 psi0^T. psi0 is normalized internally if its norm
// deviates from 1 by more than 1e-9.
inline SymMatrix deflate(const SymMatrix& h, const Vector& psi0, double s0) {
  if (int(psi0.size()) != h.n())
    throw QaeError("deflate: vector length mismatch");
  const double nrm = norm(psi0);
  if (nrm <= 0.0) throw QaeError("deflate: zero vector");
  if (s0 < 0.0) throw QaeError("deflate: s0 must be >= 0");
  Vector u = psi0;
  if (std::abs(nrm - 1.0) > 1e-9)
    for (double& x : u) x /= nrm;
  SymMatrix out = h;
  for (int i = 0; i < h.n(); ++i)
    for (int j = i; j < h.n(); ++j) out.add(i, j, s0 * u[i] * u[j]);
  return out;
}

}  // namespace qae
