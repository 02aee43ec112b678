#pragma once

#include <cmath>
#include <cstdint>

namespace vvsim::rng {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Published seed-derivation rule: the stream for child `index` of a master
// seed is derive(master, index). Fixed so that runs can be replayed exactly
// from a manifest regardless of worker count.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Small sequential generator (SplitMix64 stream).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Bounded draw via Lemire multiply-shift.
  std::uint32_t below(std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform in the open interval (0, 1).
  double unit() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Counter-addressed standard normal draw: a pure function of
// (seed, step, lane). Values do not depend on evaluation order, so
// trajectories replay bit-for-bit across thread counts.
inline double counter_normal(std::uint64_t seed, std::uint64_t step,
                             std::uint64_t lane) noexcept {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ (step + 0x9e3779b97f4a7c15ULL));
  k = mix64(k ^ (lane + 0xbf58476d1ce4e5b9ULL));
  const std::uint64_t a = mix64(k + 1);
  const std::uint64_t b = mix64(k + 2);
  const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace vvsim::rng
