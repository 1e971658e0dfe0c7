// qae/hamiltonian.hpp -- model vibrational Hamiltonians in truncated bases:
// d-dimensional harmonic oscillators in a cosine basis and a Morse "1D
// molecule" in a real Fourier basis. Kinetic parts are analytic and diagonal;
// potential matrix elements use composite trapezoid quadrature.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qae/linalg.hpp"

namespace qae {

namespace defaults {
// Domain half-width in units of the oscillator length 1/sqrt(mass*omega).
// Tuned so truncated small-B ground energies sit a few cm^-1 above the scan
// window starts; widen (e.g. 5.0) for continuum-limit studies.
inline constexpr double kHalfwidthSigmas = 2.6;
inline constexpr int kQuadFactor = 16;  // quadrature_points = 16 * B
inline constexpr int kVariableCap = 5000;
inline constexpr double kMorseD = 40000.0;
inline constexpr double kMorseA = 5.656854249492381;  // 4*sqrt(2)
inline constexpr double kMorseRe = 1.0;
}  // namespace defaults

enum class BasisKind { cosine, fourier };

// Basis on [x_min, x_max]:
//   cosine : phi_m(x) = N_m cos(m pi (x-x_min)/L), m = 0..m_max, B = m_max+1
//   fourier: {1/sqrt(L), sqrt(2/L) cos(2 pi n u/L), sqrt(2/L) sin(2 pi n u/L)}
//            with u = x-x_min, n = 1..m_max, B = 2*m_max+1
struct BasisSpec {
  BasisKind kind = BasisKind::cosine;
  int m_max = 2;
  double x_min = -1.0;
  double x_max = 1.0;
  int quadrature_points = 0;  // 0 -> 16*B

  int size() const {
    return kind == BasisKind::cosine ? m_max + 1 : 2 * m_max + 1;
  }
  double length() const { return x_max - x_min; }

  void validate() const {
    if (m_max < 0) throw QaeError("BasisSpec: m_max must be >= 0");
    if (!(x_max > x_min)) throw QaeError("BasisSpec: x_max must exceed x_min");
    if (quadrature_points != 0 && quadrature_points < 4 * size())
      throw QaeError("BasisSpec: quadrature_points must be >= 4*B");
  }
  int quad_points() const {
    return quadrature_points > 0 ? quadrature_points
                                 : defaults::kQuadFactor * size();
  }
};

enum class PotentialKind { harmonic, morse, tabulated };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::harmonic;
  // harmonic: V = 0.5 * mass * omega^2 x^2 around the domain center
  double omega = 800.0;
  // morse: V = D (1 - exp(-a (x - r_e)))^2
  double morse_d = 0.0;
  double morse_a = 0.0;
  double r_e = 0.0;
  // tabulated: linear interpolation, no extrapolation
  Vector grid_x;
  Vector grid_v;

  void validate() const {
    switch (kind) {
      case PotentialKind::harmonic:
        if (omega <= 0.0) throw QaeError("PotentialSpec: omega must be > 0");
        break;
      case PotentialKind::morse:
        if (morse_d <= 0.0 || morse_a <= 0.0)
          throw QaeError("PotentialSpec: D and a must be > 0");
        break;
      case PotentialKind::tabulated:
        if (grid_x.size() < 2 || grid_x.size() != grid_v.size())
          throw QaeError("PotentialSpec: tabulated grid needs >= 2 points");
        for (std::size_t i = 1; i < grid_x.size(); ++i)
          if (!(grid_x[i] > grid_x[i - 1]))
            throw QaeError("PotentialSpec: grid must be strictly increasing");
        break;
    }
  }

  double value(double x, double mass, double center) const {
    switch (kind) {
      case PotentialKind::harmonic: {
        const double dx = x - center;
        return 0.5 * mass * omega * omega * dx * dx;
      }
      case PotentialKind::morse: {
        const double e = 1.0 - std::exp(-morse_a * (x - r_e));
        return morse_d * e * e;
      }
      case PotentialKind::tabulated: {
        if (x < grid_x.front() || x > grid_x.back())
          throw QaeError("PotentialSpec: x outside tabulated grid");
        std::size_t lo = 0, hi = grid_x.size() - 1;
        while (hi - lo > 1) {
          const std::size_t mid = (lo + hi) / 2;
          (grid_x[mid] <= x ? lo : hi) = mid;
        }
        const double t = (x - grid_x[lo]) / (grid_x[hi] - grid_x[lo]);
        return grid_v[lo] + t * (grid_v[hi] - grid_v[lo]);
      }
    }
    throw QaeError("PotentialSpec: unknown kind");
  }
};

struct DimensionSpec {
  BasisSpec basis;
  PotentialSpec potential;
  double mass = 1.0;
};

// d-dimensional separable problem on a direct-product basis of size B^d
// (same B per dimension). variable_cap bounds K * B^d QUBO variables.
struct ProblemSpec {
  std::vector<DimensionSpec> dims;
  int variable_cap = defaults::kVariableCap;

  int d() const { return int(dims.size()); }
  int b() const {
    if (dims.empty()) throw QaeError("ProblemSpec: no dimensions");
    const int b0 = dims[0].basis.size();
    for (const auto& dim : dims)
      if (dim.basis.size() != b0)
        throw QaeError("ProblemSpec: all dimensions must share one B");
    return b0;
  }
};

inline double basis_value(const BasisSpec& bs, int m, double x) {
  const double l = bs.length();
  const double u = x - bs.x_min;
  if (bs.kind == BasisKind::cosine) {
    const double nm = (m == 0) ? std::sqrt(1.0 / l) : std::sqrt(2.0 / l);
    return nm * std::cos(m * 3.14159265358979323846 * u / l);
  }
  if (m == 0) return std::sqrt(1.0 / l);
  const int n = (m + 1) / 2;
  const double arg = 2.0 * 3.14159265358979323846 * n * u / l;
  const double nm = std::sqrt(2.0 / l);
  return (m % 2 == 1) ? nm * std::cos(arg) : nm * std::sin(arg);
}

inline double kinetic_diagonal(const BasisSpec& bs, int m, double mass) {
  const double l = bs.length();
  if (bs.kind == BasisKind::cosine) {
    const double k = m * 3.14159265358979323846 / l;
    return k * k / (2.0 * mass);
  }
  if (m == 0) return 0.0;
  const int n = (m + 1) / 2;
  const double k = 2.0 * 3.14159265358979323846 * n / l;
  return k * k / (2.0 * mass);
}

// H_ab = <phi_a| -1/(2m) d^2/dx^2 + V |phi_b>, dimension B. The kinetic part
// is exactly diagonal for both basis kinds; V is integrated on a uniform grid
// of quad_points() points (trapezoid weights).
inline SymMatrix build_1d_hamiltonian(const BasisSpec& basis,
                                      const PotentialSpec& pot, double mass) {
  basis.validate();
  pot.validate();
  if (mass <= 0.0) throw QaeError("build_1d_hamiltonian: mass must be > 0");
  const int b = basis.size();
  const int np = basis.quad_points();
  if (np < 4 * b)
    throw QaeError("build_1d_hamiltonian: quadrature_points must be >= 4*B");

  const double l = basis.length();
  const double h = l / (np - 1);
  const double center = 0.5 * (basis.x_min + basis.x_max);

  std::vector<double> x(np), w(np), vx(np);
  for (int i = 0; i < np; ++i) {
    x[i] = basis.x_min + h * i;
    w[i] = (i == 0 || i == np - 1) ? 0.5 * h : h;
    vx[i] = pot.value(x[i], mass, center);
    if (!std::isfinite(vx[i]))
      throw QaeError("build_1d_hamiltonian: non-finite potential value");
  }
  std::vector<double> phi(std::size_t(b) * np);
  for (int m = 0; m < b; ++m)
    for (int i = 0; i < np; ++i)
      phi[std::size_t(m) * np + i] = basis_value(basis, m, x[i]);

  SymMatrix out(b);
  for (int a = 0; a < b; ++a) {
    for (int c = a; c < b; ++c) {
      double s = 0.0;
      for (int i = 0; i < np; ++i)
        s += w[i] * phi[std::size_t(a) * np + i] * vx[i] *
             phi[std::size_t(c) * np + i];
      out.set(a, c, s);
    }
    out.add(a, a, kinetic_diagonal(basis, a, mass));
  }
  return out;
}

// H = sum_i I x ... x H_i x ... x I on the B^d product basis. The composite
// index runs row-major with dimension 0 slowest, matching the multi-dimension
// qubit map (i = K B (alpha-1) + K (beta-1) + k in 2D).
inline SymMatrix build_product_hamiltonian(const ProblemSpec& spec,
                                           int k_qubits = 1) {
  const int d = spec.d();
  const int b = spec.b();
  double dim_check = 1.0;
  for (int i = 0; i < d; ++i) dim_check *= b;
  if (dim_check * std::max(1, k_qubits) > double(spec.variable_cap))
    throw QaeError("build_product_hamiltonian: K*B^d = " +
                   std::to_string(dim_check * std::max(1, k_qubits)) +
                   " exceeds variable cap " +
                   std::to_string(spec.variable_cap));

  std::vector<SymMatrix> h1;
  h1.reserve(d);
  for (const auto& dim : spec.dims)
    h1.push_back(
        build_1d_hamiltonian(dim.basis, dim.potential, dim.mass));
  if (d == 1) return h1[0];

  int dim = 1;
  for (int i = 0; i < d; ++i) dim *= b;
  // stride of dimension t in the composite index (dimension 0 slowest)
  std::vector<int> stride(d, 1);
  for (int t = d - 2; t >= 0; --t) stride[t] = stride[t + 1] * b;

  SymMatrix out(dim);
  std::vector<int> digits(d);
  for (int row = 0; row < dim; ++row) {
    int r = row;
    for (int t = 0; t < d; ++t) {
      digits[t] = r / stride[t];
      r %= stride[t];
    }
    // diagonal: sum of 1D diagonals
    double diag = 0.0;
    for (int t = 0; t < d; ++t) diag += h1[t].at(digits[t], digits[t]);
    out.set(row, row, diag);
    // off-diagonal: exactly one dimension changes index
    for (int t = 0; t < d; ++t) {
      for (int c = digits[t] + 1; c < b; ++c) {
        const int col = row + (c - digits[t]) * stride[t];
        out.set(row, col, h1[t].at(digits[t], c));
      }
    }
  }
  return out;
}

// d-dimensional harmonic benchmark: omega_i = omega0 + step*(i-1), cosine
// basis of size B per dimension, domain half-width hw_sigmas/sqrt(mass*omega).
inline ProblemSpec harmonic_problem(
    int d, int b, double omega0 = 800.0, double omega_step = 200.0,
    double hw_sigmas = defaults::kHalfwidthSigmas, double mass = 1.0,
    int quad_factor = defaults::kQuadFactor) {
  if (d < 1 || b < 1) throw QaeError("harmonic_problem: d and B must be >= 1");
  ProblemSpec spec;
  for (int i = 0; i < d; ++i) {
    DimensionSpec dim;
    const double omega = omega0 + omega_step * i;
    const double hw = hw_sigmas / std::sqrt(mass * omega);
    dim.basis.kind = BasisKind::cosine;
    dim.basis.m_max = b - 1;
    dim.basis.x_min = -hw;
    dim.basis.x_max = hw;
    dim.basis.quadrature_points = quad_factor * b;
    dim.potential.kind = PotentialKind::harmonic;
    dim.potential.omega = omega;
    dim.mass = mass;
    spec.dims.push_back(dim);
  }
  return spec;
}

// Fixed Morse parameter set for the "1D molecule" case. In reduced units
// (mass 1) omega_e = a*sqrt(2D) = 1600 and omega_e x_e = a^2/2 = 16 cm^-1
// exactly, so the analytic levels are E0 = 796, E1 = 2364, E2 = 3900. The
// B = 9 Fourier basis below truncates these to ~796.0 and ~2364.1; the
// committed oracle eigenvalues are regression fixtures in the test suite.
inline DimensionSpec morse_surrogate_default() {
  DimensionSpec dim;
  const double omega_e = 1600.0;
  const double sigma = 1.0 / std::sqrt(omega_e);
  dim.potential.kind = PotentialKind::morse;
  dim.potential.morse_d = defaults::kMorseD;
  dim.potential.morse_a = defaults::kMorseA;
  dim.potential.r_e = defaults::kMorseRe;
  dim.mass = 1.0;
  dim.basis.kind = BasisKind::fourier;
  dim.basis.m_max = 4;  // B = 9
  dim.basis.x_min = dim.potential.r_e - 3.5 * sigma;
  dim.basis.x_max = dim.potential.r_e + 4.5 * sigma;
  dim.basis.quadrature_points = defaults::kQuadFactor * dim.basis.size();
  return dim;
}

inline ProblemSpec morse_problem() {
  ProblemSpec spec;
  spec.dims.push_back(morse_surrogate_default());
  return spec;
}

}  // namespace qae
