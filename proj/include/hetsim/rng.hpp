#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hetsim {

/// splitmix64 finalizer; used to derive independent seeds from (run seed,
/// stream tag, slot index) without correlated low bits.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t t) {
  return mix_seed(mix_seed(mix_seed(seed) ^ tag) ^ t);
}

/// Sampler over mt19937_64 with hand-rolled distributions. The standard
/// library distributions are implementation-defined; these are not, so a
/// (seed, slot) pair replays bit-identically anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Exponential with unit mean.
  double exp1() { return -std::log1p(-uniform()); }

  /// Standard normal via Box-Muller (single value per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Poisson by Knuth's product method; fine for the small rates used here.
  int poisson(double lambda) {
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hetsim
