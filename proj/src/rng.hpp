#pragma once

#include <cstdint>
#include <random>

namespace tsrlab {

// Deterministic random source. std::mt19937_64 has a portable, standardized
// output sequence, but the std::uniform_* distributions do not, so the
// mappings from raw 64-bit outputs to doubles and bounded ints are done by
// hand here. Two runs with the same seed produce the same draws on any
// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1): top 53 bits of one engine output.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform int in [0, n). Rejection sampling keeps it exactly unbiased.
  int uniform_int(int n);

 private:
  std::mt19937_64 engine_;
};

// Derives the seed for one (run seed, agent, phase) stream. Each training
// phase of each agent gets an independent engine so adding or removing an
// agent never perturbs the draws seen by the others.
std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t agent_id,
                         std::uint64_t phase);

}  // namespace tsrlab
