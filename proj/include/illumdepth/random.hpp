#pragma once

#include "illumdepth/core.hpp"

#include <cstdint>
#include <random>

namespace illumdepth {

// Advances state and returns the next splitmix64 output.
std::uint64_t splitmix64(std::uint64_t& state);

// Seeded stream with platform-independent uniforms and normals.
// Stream s of seed k is independent of the draw order in other streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  // 53-bit uniform on [0, 1).
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Standard normal by Box-Muller.
  double normal();
  Vector normal_vector(int d);
  // Uniform on the unit sphere S^{d-1}.
  Vector unit_vector(int d);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace illumdepth
