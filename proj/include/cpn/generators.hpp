#pragma once

#include <cstdint>
#include <string>

#include "cpn/net.hpp"

namespace cpn {

/// SplitMix64: tiny, fully specified 64-bit PRNG, so generated instances are
/// bit-identical across platforms and implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by rejection; n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

struct LatticeInstance {
  Cpn net;
  Marking m0;
  std::string goal;
  std::string name;
};

// rows x cols grid of places; one unit-weight transition per directed east
// and south edge. ceil(resource_fraction * |P|) random places receive mass 1
// and a random place becomes the goal. Deterministic under the seed.
LatticeInstance gen_lattice(int rows, int cols, std::uint64_t seed, const Rat& resource_fraction);

// Random net: each (place, transition, direction) arc appears independently
// with probability `density`, weight uniform in 1..max_weight; output rows
// are re-rolled until nonempty. Deterministic under the seed.
Cpn gen_random(int num_places, int num_transitions, long max_weight, const Rat& density,
               std::uint64_t seed);

// Resource placement used by the benchmark harness: ceil(fraction * |P|)
// distinct random places at mass 1, plus a uniformly drawn goal place.
struct ResourceDraw {
  Marking m0;
  Index goal;
};
ResourceDraw draw_resources(const Cpn& net, const Rat& fraction, SplitMix64& rng);

}  // namespace cpn
