#pragma once

// Seedable, splittable PRNG (splitmix64 core).  Used everywhere randomness is
// needed so that runs are reproducible from a single 64-bit seed across
// platforms; std::random distributions are avoided on purpose.

#include <cstdint>

namespace anyonsim {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double uniform() { return (double)(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, m).
  std::uint64_t uniform_int(std::uint64_t m) { return next_u64() % m; }

  // Independent child stream; deterministic function of the parent state.
  Rng split() { return Rng(next_u64() ^ 0xD1B54A32D192ED03ull); }

  double gaussian() {
    // Box-Muller; uniform() never returns 0 exactly after the clamp below.
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace anyonsim
