#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lakebench {

// A named, seeded random stream. The engine (mt19937_64) has a fully specified
// output sequence; the bounded and real-valued draws below are implemented
// here rather than through <random> distributions, whose algorithms vary
// between standard libraries. Same (seed, name) gives the same draws on every
// platform.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view name);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer, used to derive stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace lakebench
