#ifndef NEEDLE_RNG_HPP
#define NEEDLE_RNG_HPP

// xoshiro256** seeded through splitmix64. Each trial gets its own stream
// keyed by (master seed, trial index), so results do not depend on how
// trials are scheduled across threads.

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace needle {

inline constexpr std::string_view kRngName = "xoshiro256starstar/splitmix64-stream v1";

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  /// Stream for one trial: the master seed and index are mixed before expansion.
  static Xoshiro256 for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t sm = master_seed;
    const std::uint64_t a = splitmix64(sm);
    std::uint64_t mixed = a ^ (trial_index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL);
    return Xoshiro256(splitmix64(mixed));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace needle

#endif  // NEEDLE_RNG_HPP
