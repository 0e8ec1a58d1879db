#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pcsimple {

// SplitMix64 step; used for seeding and for deriving independent streams.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for stream `index` derived from a master seed. Replicate r of a run
// seeded with s always uses split_seed(s, r), whatever the scheduling.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

// xoshiro256++ with SplitMix64 seeding. Satisfies UniformRandomBitGenerator.
// Gaussian draws go through the normal quantile so every draw consumes
// exactly one 64-bit output.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Integer uniform on [lo, hi].
  int uniform_int(int lo, int hi);
  // Standard normal via inverse CDF.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace pcsimple
