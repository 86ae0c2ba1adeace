// Counter-based 64-bit generator: the SplitMix64 output function applied to
// seed + counter * GOLDEN. Substreams are split by folding the stream id
// into the seed through the same mixer, so (seed, stream, counter) fully
// determines every draw independently of call order or sharding.
#pragma once

#include <cstdint>

namespace volsos {

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(stream == 0 ? seed : mix(seed ^ mix(stream))) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Draw for an explicit counter; stateless, shard-safe.
  uint64_t at(uint64_t counter) const { return mix(key_ + counter * 0x9E3779B97F4A7C15ull); }
  double uniform_at(uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

  // Sequential convenience interface over the same stream.
  uint64_t next_u64() { return at(counter_++); }
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace volsos
