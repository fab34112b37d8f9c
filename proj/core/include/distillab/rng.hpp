#pragma once

#include <cstdint>
#include <span>

namespace distillab {

// splitmix64 step. Small, fast, and fully specified, so every draw in the
// project is bit-reproducible across platforms and thread counts.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Per-stream seed derivation: hash(master, stream). Trials, teachers and
// sweep rows each get their own stream so parallel execution never contends
// on shared RNG state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  std::uint64_t a = splitmix64(s);
  return splitmix64(s) ^ a;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // One warm-up step decorrelates small consecutive seeds.
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

 private:
  std::uint64_t state_;
};

// Inverse-CDF draw against a running sum of weights; weights must sum to ~1.
// Falls back to the last positive-weight cell so a round-off shortfall in the
// running sum cannot let u escape past the end.
inline std::size_t sample_discrete(std::span<const double> weights, double u) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace distillab
