#pragma once

// Deterministic random streams: splitmix64 for seeding/mixing and
// xoshiro256++ for the bulk stream, both per the published reference
// algorithms (Blackman & Vigna), so any language can reproduce the
// sample sequence from the documented seed derivation.

#include <cmath>
#include <cstdint>

#include "su2geom/algebra.hpp"

namespace su2 {

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

struct Xoshiro256pp {
  std::uint64_t s[4];

  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s) w = sm.next();
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // uniform in [0,1) with 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Per-grid-point stream: seed' = splitmix64 chain over
// (master ^ golden, i-index, j-index).  Documented in the README.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j) {
  SplitMix64 sm(master);
  std::uint64_t h = sm.next();
  SplitMix64 si(h ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
  h = si.next();
  SplitMix64 sj(h ^ (0xbf58476d1ce4e5b9ULL * (j + 1)));
  return sj.next();
}

// Standard normal pairs via Box-Muller (std::normal_distribution is
// implementation-defined, which would break cross-run determinism).
struct GaussianSource {
  Xoshiro256pp rng;
  double spare = 0.0;
  bool has_spare = false;

  explicit GaussianSource(std::uint64_t seed) : rng(seed) {}

  double next() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u1 = rng.uniform01();
    while (u1 <= 0.0) u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare = r * std::sin(a);
    has_spare = true;
    return r * std::cos(a);
  }
};

// Haar-uniform element of SU(2): four independent standard normals,
// normalized.
inline GroupElement haar_sample(GaussianSource& g) {
  GroupElement q{g.next(), g.next(), g.next(), g.next()};
  return q.renormalized();
}

}  // namespace su2
