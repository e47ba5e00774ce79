#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace posebench {

// Deterministic splitmix64 generator. Every stochastic step in the project
// draws from one of these, seeded via derive(), so results are reproducible
// regardless of thread count or platform RNG library differences.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Derives an independent stream from a base seed and stream identifiers,
  // e.g. derive(seed, {kForestStream, tree_index}).
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
    std::uint64_t s = mix(seed ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t id : stream) s = mix(s ^ mix(id + 0x9e3779b97f4a7c15ULL));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double next_double_open_closed() { return 1.0 - next_double(); }

  // Uniform integer in [0, n). Rejection sampling over a power-of-two mask,
  // so the distribution is exact.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = next_u64() & mask;
    } while (v >= n);
    return v;
  }

  // Standard normal via Box-Muller (cosine branch only; stateless per call).
  double normal() {
    double u1 = next_double_open_closed();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Writes into `out` the first k entries of a Fisher-Yates pass over
  // `pool` (which is permuted in place). Selected values are then sorted
  // ascending by the caller if scan order matters.
  void sample_without_replacement(std::vector<int>& pool, int k, std::vector<int>& out) {
    out.clear();
    const int n = static_cast<int>(pool.size());
    if (k > n) k = n;
    for (int i = 0; i < k; ++i) {
      int j = i + static_cast<int>(uniform_index(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace posebench
