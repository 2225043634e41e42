#pragma once

// Seeded RNG with explicit stream splitting.  Stream k of seed s is the
// xoshiro-free splitmix64 sequence started at mix(s, k), so trajectories
// and noise paths are reproducible independent of execution order and the
// C++ library's distribution internals (we do our own Box-Muller).

#include <cmath>
#include <cstdint>

namespace rff {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitRng {
 public:
  SplitRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    // decorrelate seed and stream before mixing them together
    std::uint64_t a = splitmix64_next(s);
    s = stream ^ 0x5851f42d4c957f2dULL;
    std::uint64_t b = splitmix64_next(s);
    state_ = a ^ (b + 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // uniform in (0,1), never exactly 0
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller, one spare cached
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform(), v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * M_PI * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rff
