#pragma once

#include <cmath>
#include <cstdint>

namespace rgg {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so point j of repetition r is the same no matter
// which thread produces it. splitmix64 is used as the mixing function.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ stream)) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(base_ ^ (counter * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
  }

  // uniform in (0,1); never returns 0 or 1
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; counter pairs (2c, 2c+1) feed one pair
  double normal(std::uint64_t counter) const {
    const std::uint64_t pair = counter >> 1;
    const double u1 = uniform(2 * pair);
    const double u2 = uniform(2 * pair + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    return (counter & 1) ? r * std::sin(a) : r * std::cos(a);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t base_;
};

}  // namespace rgg
