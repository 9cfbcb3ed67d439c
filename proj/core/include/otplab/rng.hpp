#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace otplab {

// Deterministic random source. Wraps std::mt19937_64 (whose output sequence
// is fixed by the standard) and does its own range reduction so that runs
// are reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);

  // Uniform in [lo, hi].
  std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform(hi - lo + 1);
  }

  bool coin() { return (next() >> 63) != 0; }

  void fill(std::span<std::uint8_t> out);

  // Independent child stream; the same (seed, stream) always yields the
  // same child.
  Rng fork(std::uint64_t stream) { return Rng(derive_seed(next(), stream)); }

  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

}  // namespace otplab
