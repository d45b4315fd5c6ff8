// Counter-based pseudo-random substreams. Every draw is a pure function of
// (seed, stream index, counter), so simulations partition across any number
// of worker threads without changing a single variate.
#pragma once

#include <cstdint>

namespace possim {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// 64-bit finalizer (Murmur3 variant); full avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDull;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ull;
  z ^= z >> 33;
  return z;
}

}  // namespace detail

class Substream {
 public:
  static Substream root(std::uint64_t seed) {
    return Substream(detail::mix64(seed + detail::kGolden));
  }

  // Independent child stream; children of distinct indices never share keys
  // in practice (keys are finalizer outputs of distinct inputs).
  Substream child(std::uint64_t idx) const {
    return Substream(detail::mix64(key_ ^ (detail::kGolden * (idx + 1))));
  }

  std::uint64_t next_u64() { return detail::mix64(key_ + detail::kGolden * (++n_)); }

  // Uniform on the open interval (0,1); never returns an exact endpoint, so
  // inverse-CDF transforms stay finite.
  double next_uniform() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  explicit constexpr Substream(std::uint64_t key) : key_(key) {}
  std::uint64_t key_;
  std::uint64_t n_ = 0;
};

}  // namespace possim
