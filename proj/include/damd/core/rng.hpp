#pragma once

#include <cstdint>
#include <random>

namespace damd::core {

/// Reproducible random stream.
///
/// Algorithm (fixed, so streams can be regenerated in any language):
///  - engine: std::mt19937_64 seeded with splitmix64(seed + 0x9E3779B97F4A7C15 * (stream + 1));
///  - uniform(): (next() >> 11) * 2^-53, in [0, 1);
///  - normal(): Box-Muller cosine branch, sqrt(-2 ln(1 - u1)) * cos(2 pi u2),
///    two uniforms consumed per normal, no caching.
class Rng
{
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  double normal(double mean, double std) { return mean + std * normal(); }

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace damd::core
