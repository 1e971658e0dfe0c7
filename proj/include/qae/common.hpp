// qae/common.hpp -- shared plumbing: deterministic RNG, seed hashing,
// wall-clock timing, number formatting.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qae {

// Error type for everything the library throws on purpose.
struct QaeError : std::runtime_error {
  explicit QaeError(const std::string& msg) : std::runtime_error(msg) {}
};

// splitmix64: stateless 64-bit mixer. Used both as a stream generator and to
// derive independent sub-seeds; outputs are identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-seed derivation: hash_seed(seed, i, j, ...) gives run-order independent
// streams for lambda samples, reads and grid cells.
inline std::uint64_t hash_seed(std::uint64_t a) { return splitmix64(a); }
template <typename... Rest>
std::uint64_t hash_seed(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return hash_seed(splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL)),
                   rest...);
}

// Small deterministic RNG (xoshiro256**), seeded via splitmix64. Not
// std::mt19937 because normal_distribution is not bit-portable; we need
// reruns to be byte-identical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) {
    std::uint64_t x = seed;
    for (auto& w : s_) {
      x = splitmix64(x);
      w = x;
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53-bit resolution.
  double u01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint32_t below(std::uint32_t n) {
    return std::uint32_t(next_u64() % n);
  }

  // Random sign, +1 or -1.
  double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  // Standard normal via Box-Muller (two uniforms per draw; the spare is
  // discarded so draw order stays trivially reproducible).
  double normal() {
    double u1 = u01();
    while (u1 <= 0.0) u1 = u01();
    const double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Canonical float formatting for CSV output: shortest round-trip-safe form.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace qae
