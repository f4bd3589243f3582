#pragma once

#include <cstdint>
#include <random>

namespace tileheur {

// splitmix64 finalizer; full-avalanche 64-bit mixing.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

// Deterministic seed splitter:
//
//   derive_seed(parent, tag) = mix64(parent + GAMMA * (tag + 1))
//
// Every unit of work (a cluster generation, one walk, one scoring pass)
// owns a seed derived from its indices along a fixed path under the master
// seed, never a share of a sequential stream. Results are therefore
// independent of worker count and of any evaluation-order optimisation.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  return mix64(parent + kGoldenGamma * (tag + 1));
}

// Top-level stream tags under a run's master seed.
enum Stream : std::uint64_t {
  kStreamDisturb = 1,  // disturbed reference tours
  kStreamCluster = 2,  // percolation cluster generation
  kStreamCollect = 3,  // random-walk thread collection
  kStreamRanking = 4,  // initial thread scoring
  kStreamEval = 5,     // vis-a-vis evaluation
  kStreamWang = 6,     // tile simulation
};

// Uniform random source with portable output. std::mt19937_64 produces the
// same sequence on every conforming implementation; the bounded draws below
// avoid std::uniform_*_distribution, whose output is implementation-defined
// and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, n); n > 0. Rejection sampling on the top
  // incomplete interval, arc4random_uniform style.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = gen_();
      if (x >= threshold) return x % n;
    }
  }

  int index(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  // Uniform real in [0, 1), 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tileheur
