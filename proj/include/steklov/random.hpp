#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace steklov {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

// Per-stage seed: the stage name is hashed and mixed with the run seed and an
// index (typically the graph size), so that every stage draws an independent
// stream regardless of execution order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage, std::uint64_t index = 0);

// Thin wrapper over mt19937_64 whose draws do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Uniform real in [0, 1).
  double uniform();
  // Uniform real in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace steklov
