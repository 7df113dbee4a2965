#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace lapgraph {

/// SplitMix64 finaliser; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for replicate/cell `index` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

/// mt19937_64 with hand-rolled uniform draws; std distributions are not
/// specified bit-for-bit, so they are avoided for reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe to take the log of.
  double uniform_open_closed() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Number of failures before the next success of a Bernoulli(p) sequence,
  /// given log1p(-p). Saturates at 2^62.
  std::int64_t geometric_skip(double log_q) {
    const double skip = std::floor(std::log(uniform_open_closed()) / log_q);
    constexpr double cap = 4.611686018427387904e18;  // 2^62
    return skip >= cap ? static_cast<std::int64_t>(cap) : static_cast<std::int64_t>(skip);
  }

 private:
  std::mt19937_64 engine_;
};

/// Streams the edges of G(n, p) as (v, w) with w < v, 0-based, in
/// lexicographic (v, w) order, skipping geometrically between edges.
template <class OnEdge>
void for_each_random_edge(std::int64_t n, double p, Rng& rng, OnEdge&& on_edge) {
  if (n < 2 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::int64_t v = 1; v < n; ++v) {
      for (std::int64_t w = 0; w < v; ++w) on_edge(v, w);
    }
    return;
  }
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  while (v < n) {
    const std::int64_t skip = rng.geometric_skip(log_q);
    if (skip > (n - v) * n) return;  // lands past the last pair
    w += 1 + skip;
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) on_edge(v, w);
  }
}

}  // namespace lapgraph
