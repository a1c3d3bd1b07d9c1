#include "rng.hpp"

#include "error.hpp"

namespace tsrlab {

int Rng::uniform_int(int n) {
  if (n <= 0) {
    throw Error(ErrorCode::InvalidArgument, "uniform_int: n must be positive");
  }
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  // Largest multiple of n that fits in 64 bits; values at or above it would
  // bias the modulus, so they are redrawn.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x = next_u64();
  while (x >= limit) {
    x = next_u64();
  }
  return static_cast<int>(x % un);
}

namespace {

// splitmix64 finalizer: bijective 64-bit mixing with good avalanche.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t agent_id,
                         std::uint64_t phase) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (agent_id + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (phase + 0x517cc1b727220a95ULL));
  return h;
}

}  // namespace tsrlab
