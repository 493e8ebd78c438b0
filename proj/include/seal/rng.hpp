#pragma once

#include <cstdint>
#include <string>

namespace seal {

// Deterministic stream generator used by every stochastic operation.
// splitmix64 is fixed by name in all manifests; it is a pure function of the
// 64-bit state, so streams replay identically across platforms and runs.
// Distributions are implemented here (not via <random>) because the standard
// library's distributions are not portable across implementations.
class SeededRng {
 public:
  static constexpr const char* kAlgorithmId = "splitmix64";

  explicit SeededRng(std::uint64_t seed) : state_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  static std::string algorithm_id() { return kAlgorithmId; }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [lo, hi], rejection-sampled to avoid modulo bias.
  std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi);

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_u64(0, static_cast<std::uint64_t>(hi - lo)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; consumes exactly two uniforms per draw.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Poisson draw: Knuth multiplication below lambda = 30, Hormann's PTRS
  // transformed rejection above. Both consume a deterministic (input-dependent)
  // number of uniforms from this stream.
  std::uint64_t poisson(double lambda);

  // Derives an independent child seed; used to give each recipe step its own
  // noise stream.
  std::uint64_t fork_seed() { return next_u64(); }

 private:
  std::uint64_t state_;
  std::uint64_t seed_;
};

// Stable 64-bit mix of a seed with a string identifier (FNV-1a then splitmix
// finalizer). Used to derive per-image noise seeds in SE test sets.
std::uint64_t mix_seed(std::uint64_t seed, const std::string& id);

}  // namespace seal
