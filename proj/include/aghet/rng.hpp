#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace aghet {

// SplitMix64 bit generator. Small state so one can be created per link
// without the setup cost of a Mersenne twister.
class SplitMix64
{
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept
  {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept
  {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept
  {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t state_;
};

/// Mixes a parent seed with a sequence of tags into an independent child
/// seed. Used to give every trial, link and optimizer its own stream.
inline std::uint64_t
derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) noexcept
{
  SplitMix64 mix(parent ^ 0x6a09e667f3bcc909ULL);
  std::uint64_t acc = mix();
  for (auto t : tags) {
    SplitMix64 step(acc ^ (t * 0x9e3779b97f4a7c15ULL + 0x3c6ef372fe94f82bULL));
    acc = step();
  }
  return acc;
}

} // namespace aghet
