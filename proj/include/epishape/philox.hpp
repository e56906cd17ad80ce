#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A keyed bijection
// of a 128-bit counter, so any entity of the random field can be sampled
// independently of every other query.

#include <array>
#include <cstdint>

namespace epishape {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t{a} * std::uint64_t{b};
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

constexpr PhiloxCounter philox_round(const PhiloxCounter& ctr, const PhiloxKey& key) {
  std::uint32_t hi0 = 0, lo0 = 0, hi1 = 0, lo1 = 0;
  mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
  mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int r = 0; r < 10; ++r) {
    ctr = detail::philox_round(ctr, key);
    if (r < 9) {
      key[0] += detail::kPhiloxW0;
      key[1] += detail::kPhiloxW1;
    }
  }
  return ctr;
}

/// Uniform in the open interval (0,1) from the top 53 bits of a word.
constexpr double open_unit_interval(std::uint64_t w) {
  return (static_cast<double>(w >> 12) + 0.5) * 0x1.0p-52;
}

/// SplitMix64 finaliser; used to derive per-replica seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t replica_seed(std::uint64_t base, std::uint64_t replica) {
  return splitmix64(base ^ splitmix64(replica + 0x632BE59BD9B4E019ULL));
}

}  // namespace epishape
