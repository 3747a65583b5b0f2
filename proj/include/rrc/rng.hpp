#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace rrc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent child seeds from a
/// master seed and a tuple of integer keys.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(Rng& rng, double sigma = 1.0) {
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Callers write results
/// into slots keyed by i, so output never depends on scheduling.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace rrc
