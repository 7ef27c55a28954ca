#pragma once

#include <cmath>
#include <cstdint>

namespace specmix {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based random stream: every draw is a pure function of
/// (seed, stream, counter), so results do not depend on generation order,
/// iteration order, or thread layout.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64(splitmix64(seed) ^ (stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t u64_at(std::uint64_t counter) const {
    return splitmix64(key_ ^ (0xd1b54a32d192ed03ULL * (counter + 1)));
  }

  /// Uniform double in [0, 1).
  double unit_at(std::uint64_t counter) const {
    return static_cast<double>(u64_at(counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return u64_at(ctr_++); }
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (platform-independent, unlike
  /// std::normal_distribution).
  double next_normal() {
    const double u1 = 1.0 - next_unit();  // (0, 1]
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

/// One Bernoulli(p) decision keyed by (seed, index); used by the generators so
/// per-item draws are independent of enumeration order.
inline bool seeded_bernoulli(std::uint64_t seed, std::uint64_t index, double p) {
  return CounterRng(seed).unit_at(index) < p;
}

}  // namespace specmix
